#include "output.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "harper/errors.hpp"

namespace harpersim {

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
        throw harper::Error("sha256: digest failed");
    static const char* hex = "0123456789abcdef";
    std::string s;
    for (unsigned int i = 0; i < len; ++i) {
        s += hex[md[i] >> 4];
        s += hex[md[i] & 15];
    }
    return s;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v == 0 ? 0.0 : v);  // no "-0"
    return buf;
}

Csv::Csv(std::vector<std::string> header) : width_(header.size()) { put(header); }

void Csv::put(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string& f = fields[i];
        if (i) out_ << ',';
        if (f.find_first_of(",\"\r\n") != std::string::npos) {
            out_ << '"';
            for (char c : f) out_ << (c == '"' ? "\"\"" : std::string(1, c));
            out_ << '"';
        } else {
            out_ << f;
        }
    }
    out_ << "\r\n";
}

void Csv::row(const std::vector<Cell>& cells) {
    if (cells.size() != width_) throw harper::Error("csv: row width does not match header");
    std::vector<std::string> f;
    for (const auto& c : cells) {
        if (auto d = std::get_if<double>(&c)) f.push_back(format_number(*d));
        else if (auto i = std::get_if<long long>(&c)) f.push_back(std::to_string(*i));
        else f.push_back(std::get<std::string>(c));
    }
    put(f);
}

Run::Run(std::filesystem::path out_dir, std::string stem)
    : dir_(std::move(out_dir)), stem_(std::move(stem)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw harper::Error("output: cannot create " + dir_.string() + ": " + ec.message());
}

void Run::write(const std::string& suffix, const std::string& content) {
    std::string name = stem_ + suffix;
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw harper::Error("output: cannot write " + (dir_ / name).string());
    f << content;
    outputs_.push_back({{"file", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
}

void Run::write_json(const std::string& suffix, const json& j) { write(suffix, j.dump(2) + "\n"); }

}  // namespace harpersim
