#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>

#include "harper/errors.hpp"
#include "harper/units.hpp"

namespace harpersim {

using harper::ValidationError;

namespace {

const std::map<std::string, double>& unit_table(Unit u) {
    static const std::map<std::string, double> freq{{"rad/s", 1},
                                                    {"Hz", harper::two_pi},
                                                    {"kHz", harper::two_pi * 1e3},
                                                    {"MHz", harper::two_pi * 1e6},
                                                    {"GHz", harper::two_pi * 1e9}};
    static const std::map<std::string, double> ind{{"H", 1}, {"uH", 1e-6}, {"nH", 1e-9}, {"pH", 1e-12}};
    static const std::map<std::string, double> cap{{"F", 1}, {"pF", 1e-12}, {"fF", 1e-15}};
    static const std::map<std::string, double> flux{{"Wb", 1}, {"Phi0", harper::flux_quantum}};
    static const std::map<std::string, double> angle{{"rad", 1}, {"pi", harper::pi}, {"deg", harper::pi / 180}};
    static const std::map<std::string, double> time{{"s", 1}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
    static const std::map<std::string, double> none{};
    switch (u) {
        case Unit::angular_frequency: return freq;
        case Unit::inductance: return ind;
        case Unit::capacitance: return cap;
        case Unit::flux: return flux;
        case Unit::angle: return angle;
        case Unit::time: return time;
        default: return none;
    }
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t"), b = s.find_last_not_of(" \t");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

double parse_quantity(const json& v, Unit unit, const std::string& path) {
    if (v.is_number()) {
        double x = v.get<double>();
        if (!std::isfinite(x)) throw ValidationError(path + ": not a finite number");
        return x;
    }
    if (!v.is_string()) throw ValidationError(path + ": expected a number or a quantity string");
    std::string s = trim(v.get<std::string>());
    const char* begin = s.c_str();
    char* end = nullptr;
    double x = 1;
    // a bare unit ("pi", "-pi") means one of it
    if (!s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.' ||
                       ((s[0] == '-' || s[0] == '+') && s.size() > 1 &&
                        (std::isdigit(static_cast<unsigned char>(s[1])) || s[1] == '.')))) {
        x = std::strtod(begin, &end);
        if (*end == '/') {
            char* e2 = nullptr;
            double den = std::strtod(end + 1, &e2);
            if (e2 == end + 1 || den == 0) throw ValidationError(path + ": bad fraction in '" + s + "'");
            x /= den;
            end = e2;
        }
    } else {
        end = const_cast<char*>(begin);
        if (*end == '-') {
            x = -1;
            ++end;
        } else if (*end == '+') {
            ++end;
        }
    }
    std::string u = trim(end);
    if (!u.empty() && u[0] == '*') u = trim(u.substr(1));
    if (u.empty()) {
        if (end == begin) throw ValidationError(path + ": empty quantity");
        return x;
    }
    const auto& table = unit_table(unit);
    auto it = table.find(u);
    if (it == table.end()) throw ValidationError(path + ": unknown unit '" + u + "'");
    return x * it->second;
}

ConfigReader::ConfigReader(const json* node, std::string path, json* resolved)
    : node_(node), path_(std::move(path)), resolved_(resolved) {}

std::string ConfigReader::where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
}

const json* ConfigReader::find(const std::string& key) const {
    if (!node_ || !node_->is_object()) return nullptr;
    auto it = node_->find(key);
    return it == node_->end() || it->is_null() ? nullptr : &*it;
}

bool ConfigReader::has(const std::string& key) const { return find(key) != nullptr; }

ConfigReader ConfigReader::block(const std::string& key, bool required) const {
    const json* n = find(key);
    if (!n && required) throw ValidationError(where(key) + ": required block is missing");
    if (n && !n->is_object()) throw ValidationError(where(key) + ": expected an object");
    json* r = nullptr;
    if (resolved_) {
        if (!resolved_->contains(key)) (*resolved_)[key] = json::object();
        r = &(*resolved_)[key];
    }
    return ConfigReader(n, where(key), r);
}

double ConfigReader::quantity(const std::string& key, Unit unit) const {
    const json* n = find(key);
    if (!n) throw ValidationError(where(key) + ": required field is missing");
    double v = parse_quantity(*n, unit, where(key));
    if (resolved_) (*resolved_)[key] = v;
    return v;
}

double ConfigReader::quantity(const std::string& key, Unit unit, double fallback) const {
    if (has(key)) return quantity(key, unit);
    if (resolved_) (*resolved_)[key] = fallback;
    return fallback;
}

int ConfigReader::integer(const std::string& key, int lo, int hi) const {
    const json* n = find(key);
    if (!n) throw ValidationError(where(key) + ": required field is missing");
    if (!n->is_number_integer()) throw ValidationError(where(key) + ": expected an integer");
    long long v = n->get<long long>();
    if (v < lo || v > hi)
        throw ValidationError(where(key) + ": must lie in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    if (resolved_) (*resolved_)[key] = v;
    return static_cast<int>(v);
}

int ConfigReader::integer(const std::string& key, int fallback, int lo, int hi) const {
    if (has(key)) return integer(key, lo, hi);
    if (resolved_) (*resolved_)[key] = fallback;
    return fallback;
}

bool ConfigReader::flag(const std::string& key, bool fallback) const {
    const json* n = find(key);
    bool v = fallback;
    if (n) {
        if (!n->is_boolean()) throw ValidationError(where(key) + ": expected true or false");
        v = n->get<bool>();
    }
    if (resolved_) (*resolved_)[key] = v;
    return v;
}

std::string ConfigReader::choice(const std::string& key, const std::string& fallback,
                                 const std::vector<std::string>& allowed) const {
    const json* n = find(key);
    std::string v = fallback;
    if (n) {
        if (!n->is_string()) throw ValidationError(where(key) + ": expected a string");
        v = n->get<std::string>();
        bool ok = false;
        for (auto& a : allowed) ok = ok || a == v;
        if (!ok) {
            std::string list;
            for (auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            throw ValidationError(where(key) + ": must be one of " + list);
        }
    }
    if (resolved_) (*resolved_)[key] = v;
    return v;
}

std::vector<double> ConfigReader::grid(const std::string& key, Unit unit,
                                       const std::vector<double>& fallback) const {
    const json* n = find(key);
    std::vector<double> g;
    if (!n) {
        g = fallback;
    } else if (n->is_array()) {
        for (std::size_t i = 0; i < n->size(); ++i)
            g.push_back(parse_quantity((*n)[i], unit, where(key) + "[" + std::to_string(i) + "]"));
    } else if (n->is_object()) {
        ConfigReader r(n, where(key), nullptr);
        double a = r.quantity("from", unit), b = r.quantity("to", unit);
        int pts = r.integer("points", 0, 10000000);
        for (int i = 0; i < pts; ++i) g.push_back(pts == 1 ? a : a + (b - a) * i / (pts - 1));
    } else {
        throw ValidationError(where(key) + ": expected a list or {from, to, points}");
    }
    if (g.empty()) throw ValidationError(where(key) + ": grid is empty");
    if (resolved_) (*resolved_)[key] = g;
    return g;
}

json load_json_file(const std::string& file, const std::string& what) {
    std::ifstream in(file);
    if (!in) throw ValidationError(what + ": cannot open " + file);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(what + ": " + file + ": " + e.what());
    }
}

}  // namespace harpersim
