#include <mvdict/config_file.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace mvdict {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
    ConfigFile config;
    config.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ":" + std::to_string(line_number) +
                             ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError(origin + ":" + std::to_string(line_number) + ": empty key");
        if (config.entries_.count(key))
            throw ParseError(origin + ":" + std::to_string(line_number) +
                             ": duplicate key " + key);
        config.entries_[key] = value;
    }
    return config;
}

ConfigFile ConfigFile::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_text(buffer.str(), path.string());
}

bool ConfigFile::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string ConfigFile::get_string(const std::string& key) const {
    const auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(origin_ + ": missing key " + key);
    return it->second;
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

double ConfigFile::get_double(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key " + key + " is not a number: " + v);
    }
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long ConfigFile::get_int(const std::string& key) const {
    const std::string v = get_string(key);
    try {
        std::size_t used = 0;
        const long i = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key " + key + " is not an integer: " + v);
    }
}

long ConfigFile::get_int(const std::string& key, long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

namespace {

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::stringstream ss(v);
    std::string field;
    while (std::getline(ss, field, ',')) parts.push_back(trim(field));
    return parts;
}

}  // namespace

std::vector<double> ConfigFile::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const std::string& field : split_list(get_string(key))) {
        try {
            out.push_back(std::stod(field));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key " + key + " has a non-numeric item: " + field);
        }
    }
    return out;
}

std::vector<long> ConfigFile::get_int_list(const std::string& key) const {
    std::vector<long> out;
    for (const std::string& field : split_list(get_string(key))) {
        try {
            out.push_back(std::stol(field));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key " + key + " has a non-integer item: " + field);
        }
    }
    return out;
}

void ConfigFile::require_known(const std::vector<std::string>& allowed) const {
    for (const auto& [key, value] : entries_) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError(origin_ + ": unknown key " + key);
    }
}

}  // namespace mvdict
