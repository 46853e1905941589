#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace harpersim {

using json = nlohmann::json;

enum class Unit { none, angular_frequency, inductance, capacitance, flux, angle, time };

// "4 MHz" -> 2 pi 4e6 rad/s, "210 pH", "0.25 Phi0", "-1/2 pi", "3 us".
// Bare numbers are SI (rad/s, H, F, Wb, rad, s).
double parse_quantity(const json& v, Unit unit, const std::string& path);

// Reads one block of the config and mirrors every value it reads, defaults
// included, into `resolved` (in SI numbers) so the manifest shows what ran.
class ConfigReader {
public:
    ConfigReader(const json* node, std::string path, json* resolved);

    bool has(const std::string& key) const;
    ConfigReader block(const std::string& key, bool required = false) const;

    double quantity(const std::string& key, Unit unit) const;
    double quantity(const std::string& key, Unit unit, double fallback) const;
    int integer(const std::string& key, int fallback, int lo, int hi) const;
    int integer(const std::string& key, int lo, int hi) const;
    bool flag(const std::string& key, bool fallback) const;
    std::string choice(const std::string& key, const std::string& fallback,
                       const std::vector<std::string>& allowed) const;
    // {"from", "to", "points"} or an explicit list; at least one point
    std::vector<double> grid(const std::string& key, Unit unit,
                             const std::vector<double>& fallback) const;

    const std::string& path() const { return path_; }

private:
    const json* node_;
    std::string path_;
    json* resolved_;
    std::string where(const std::string& key) const;
    const json* find(const std::string& key) const;
};

json load_json_file(const std::string& file, const std::string& what);

}  // namespace harpersim
