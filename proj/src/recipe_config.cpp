#include "healthguard/dataset.hpp"

#include "healthguard/errors.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

namespace hg {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        const auto p = s.find(sep);
        const auto item = trim(s.substr(0, p));
        if (!item.empty()) out.push_back(item);
        if (p == std::string_view::npos) break;
        s = s.substr(p + 1);
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s, std::string_view key, std::size_t line) {
    T v{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ConfigError("invalid value '" + std::string(s) + "' for " + std::string(key), line);
    return v;
}

ConditionLabel parse_label_or_throw(std::string_view s, std::size_t line) {
    if (auto l = parse_label(s)) return *l;
    throw ConfigError("unknown condition '" + std::string(s) + "'", line);
}

DeviceKind parse_device_or_throw(std::string_view s, std::size_t line) {
    if (auto d = parse_device(s)) return *d;
    throw ConfigError("unknown device '" + std::string(s) + "'", line);
}

}  // namespace

DatasetRecipe parse_recipe(std::istream& in) {
    DatasetRecipe r;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line);
        const auto key = trim(text.substr(0, eq));
        const auto value = trim(text.substr(eq + 1));
        if (value.empty()) throw ConfigError("empty value for " + std::string(key), line);

        if (key == "segments") {
            r.segments.clear();
            for (auto item : split_list(value, ',')) {
                const auto colon = item.find(':');
                if (colon == std::string_view::npos) throw ConfigError("segment must be Condition:minutes", line);
                const auto label = parse_label_or_throw(trim(item.substr(0, colon)), line);
                if (!is_benign(label)) throw ConfigError("segment condition must be benign", line);
                const auto minutes = parse_number<std::uint32_t>(trim(item.substr(colon + 1)), key, line);
                if (minutes == 0) throw ConfigError("segment duration must be positive", line);
                r.segments.push_back({label, minutes});
            }
        } else if (key == "seed") {
            r.seed = parse_number<std::uint64_t>(value, key, line);
        } else if (key == "devices") {
            if (value == "all") {
                r.devices = DeviceMask::all();
            } else {
                r.devices = DeviceMask::none();
                for (auto item : split_list(value, ',')) r.devices = r.devices.with(parse_device_or_throw(item, line));
            }
            if (r.devices.empty()) throw ConfigError("devices must not be empty", line);
        } else if (key == "noise_scale") {
            r.noise_scale = parse_number<double>(value, key, line);
            if (!(r.noise_scale >= 0.0)) throw ConfigError("noise_scale must be nonnegative", line);
        } else if (key == "rate_per_hour") {
            r.rate_per_hour = parse_number<double>(value, key, line);
            if (!(*r.rate_per_hour >= 0.0)) throw ConfigError("rate_per_hour must be nonnegative", line);
        } else if (key == "malicious_fraction") {
            r.malicious_fraction = parse_number<double>(value, key, line);
            if (!(r.malicious_fraction >= 0.0 && r.malicious_fraction < 1.0))
                throw ConfigError("malicious_fraction must be in [0, 1)", line);
        } else if (key == "duration_min") {
            r.duration_min = parse_number<std::uint32_t>(value, key, line);
        } else if (key == "duration_max") {
            r.duration_max = parse_number<std::uint32_t>(value, key, line);
        } else if (key == "threats") {
            r.threats.clear();
            for (auto item : split_list(value, ',')) {
                const auto label = parse_label_or_throw(item, line);
                if (!is_malicious(label)) throw ConfigError("threat must be an attack label", line);
                r.threats.push_back(label);
            }
            if (r.threats.empty()) throw ConfigError("threats must not be empty", line);
        } else if (key == "instances") {
            r.instances = parse_number<std::uint32_t>(value, key, line);
        } else if (key == "scenario_minutes") {
            r.scenario_minutes = parse_number<std::uint32_t>(value, key, line);
        } else if (key == "segment_minutes") {
            r.segment_minutes = parse_number<std::uint32_t>(value, key, line);
        } else if (key == "events") {
            // Kind:device:onset:duration; ...
            r.events.clear();
            for (auto item : split_list(value, ';')) {
                const auto parts = split_list(item, ':');
                if (parts.size() != 4) throw ConfigError("event must be Kind:device:onset:duration", line);
                const auto kind = parse_label_or_throw(parts[0], line);
                if (!is_malicious(kind)) throw ConfigError("event kind must be an attack label", line);
                AttackEvent e{kind, parse_device_or_throw(parts[1], line),
                              parse_number<std::uint32_t>(parts[2], key, line),
                              parse_number<std::uint32_t>(parts[3], key, line)};
                if (e.duration_minutes == 0) throw ConfigError("event duration must be positive", line);
                r.events.push_back(e);
            }
        } else {
            throw ConfigError("unknown key '" + std::string(key) + "'", line);
        }
    }
    r.validate();
    std::uint32_t script = 0;
    for (const auto& s : r.segments) script += s.minutes;
    for (const auto& e : r.events) {
        if (e.end_minute() > script) throw ConfigError("event window exceeds the segments script");
        if (!r.devices.contains(e.target)) throw ConfigError("event target is not an enabled device");
    }
    return r;
}

DatasetRecipe load_recipe(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_recipe(in);
}

}  // namespace hg
