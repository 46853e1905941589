#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace harpersim {

using json = nlohmann::json;

std::string sha256_hex(const std::string& data);
// %.10g, "nan" for NaN
std::string format_number(double v);

class Csv {
public:
    using Cell = std::variant<double, long long, std::string>;
    explicit Csv(std::vector<std::string> header);
    void row(const std::vector<Cell>& cells);
    std::string str() const { return out_.str(); }

private:
    std::size_t width_;
    std::ostringstream out_;
    void put(const std::vector<std::string>& fields);
};

// Collects artifacts of one run and writes them plus manifest.json.
class Run {
public:
    Run(std::filesystem::path out_dir, std::string stem);
    const std::string& stem() const { return stem_; }
    void write(const std::string& suffix, const std::string& content);
    void write_json(const std::string& suffix, const json& j);
    const json& outputs() const { return outputs_; }

private:
    std::filesystem::path dir_;
    std::string stem_;
    json outputs_ = json::array();
};

}  // namespace harpersim
