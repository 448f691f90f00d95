// SPDX-License-Identifier: Apache-2.0
//
// Part of secbeam. Copyright (c) 2026 the secbeam authors.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "secbeam/channel.hpp"
#include "secbeam/units.hpp"

namespace secbeam {

// Plain-text configuration: one `key = value` per line, `#` starts a
// comment, lists are comma-separated. Unknown keys are errors (they are
// almost always typos); missing keys fall back to the documented defaults.
//
//   n_antennas n_video_receivers n_idle n_basic n_layers n_eavesdroppers
//   sinr_req_db sinr_tol_db kappa noise_dbm harvest_floor_dbm harvest_eff
//   carrier_hz ref_distance_m max_distance_m antenna_gain_dbi rician_k_db
//   eav_noise_norm seed n_rand
//
// plus the optional path-loss shape (pl_breakpoint_m, pl_slope_near,
// pl_slope_far) and n_chance_samples. Sweep files additionally carry
// axis, axis_values, trials_per_point, schemes.

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::map<std::string, std::string> parse_kv_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::runtime_error("config line " + std::to_string(lineno) + ": empty key or value");
        if (kv.count(key))
            throw std::runtime_error("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

inline double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + key + "' has non-numeric value '" + v + "'");
    }
    if (pos != v.size())
        throw std::runtime_error("config: key '" + key + "' has trailing junk in '" + v + "'");
    return d;
}

inline long long to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    const long long i = static_cast<long long>(d);
    if (double(i) != d) throw std::runtime_error("config: key '" + key + "' expects an integer");
    return i;
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(t);
    }
    return out;
}

}  // namespace detail

// Applies `kv` on top of defaults; `consumed` collects recognized keys so
// callers layering extra schemas (sweeps) can detect genuinely unknown ones.
inline ScenarioConfig config_from_kv(const std::map<std::string, std::string>& kv,
                                     std::vector<std::string>* unconsumed = nullptr) {
    using detail::to_double;
    using detail::to_int;
    ScenarioConfig c;
    std::vector<std::string> extra;
    for (const auto& [key, val] : kv) {
        if (key == "n_antennas") c.n_antennas = int(to_int(key, val));
        else if (key == "n_video_receivers") c.n_video = int(to_int(key, val));
        else if (key == "n_idle") c.n_idle = int(to_int(key, val));
        else if (key == "n_basic") c.n_basic = int(to_int(key, val));
        else if (key == "n_layers") c.n_layers = int(to_int(key, val));
        else if (key == "n_eavesdroppers") c.n_eavesdroppers = int(to_int(key, val));
        else if (key == "sinr_req_db") {
            c.sinr_req.clear();
            for (const std::string& s : detail::split_list(val))
                c.sinr_req.push_back(db_to_linear(to_double(key, s)));
        } else if (key == "sinr_tol_db") c.sinr_tol1 = db_to_linear(to_double(key, val));
        else if (key == "kappa") c.kappa = to_double(key, val);
        else if (key == "noise_dbm") c.noise_w = dbm_to_watts(to_double(key, val));
        else if (key == "harvest_floor_dbm") c.harvest_floor_w = dbm_to_watts(to_double(key, val));
        else if (key == "harvest_eff") c.harvest_eff = to_double(key, val);
        else if (key == "carrier_hz") c.carrier_hz = to_double(key, val);
        else if (key == "ref_distance_m") c.ref_distance_m = to_double(key, val);
        else if (key == "max_distance_m") c.max_distance_m = to_double(key, val);
        else if (key == "antenna_gain_dbi") c.antenna_gain_dbi = to_double(key, val);
        else if (key == "rician_k_db") c.rician_k = db_to_linear(to_double(key, val));
        else if (key == "eav_noise_norm") c.eav_noise_norm = to_double(key, val);
        else if (key == "pl_breakpoint_m") c.pl_breakpoint_m = to_double(key, val);
        else if (key == "pl_slope_near") c.pl_slope_near = to_double(key, val);
        else if (key == "pl_slope_far") c.pl_slope_far = to_double(key, val);
        else if (key == "seed") c.seed = std::uint64_t(to_int(key, val));
        else if (key == "n_rand") c.n_rand = int(to_int(key, val));
        else if (key == "n_chance_samples") c.n_chance_samples = int(to_int(key, val));
        else extra.push_back(key);
    }
    if (unconsumed)
        *unconsumed = extra;
    else if (!extra.empty())
        throw std::runtime_error("config: unknown key '" + extra.front() + "'");
    validate(c);
    return c;
}

inline ScenarioConfig parse_config(std::istream& in) {
    return config_from_kv(detail::parse_kv_text(in));
}

inline ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    return parse_config(f);
}

// Sweep description: the base scenario plus one swept axis. Valid axes:
// "n_receivers" (video receiver count; idle count stays fixed) and
// "n_antennas".
struct SweepSpec {
    ScenarioConfig base;
    std::string axis = "n_receivers";
    std::vector<int> axis_values;
    int trials_per_point = 100;
    std::vector<std::string> schemes = {"sdr", "scheme1", "scheme2", "baseline"};
};

inline const std::vector<std::string>& known_scheme_names() {
    static const std::vector<std::string> names = {"sdr", "scheme1", "scheme2", "baseline"};
    return names;
}

inline SweepSpec parse_sweep(std::istream& in) {
    using detail::to_int;
    const auto kv = detail::parse_kv_text(in);
    SweepSpec sw;
    std::vector<std::string> extra;
    sw.base = config_from_kv(kv, &extra);
    for (const std::string& key : extra) {
        const std::string& val = kv.at(key);
        if (key == "axis") {
            if (val != "n_receivers" && val != "n_antennas")
                throw std::runtime_error("sweep: axis must be n_receivers or n_antennas");
            sw.axis = val;
        } else if (key == "axis_values") {
            sw.axis_values.clear();
            for (const std::string& s : detail::split_list(val))
                sw.axis_values.push_back(int(to_int(key, s)));
        } else if (key == "trials_per_point") {
            sw.trials_per_point = int(to_int(key, val));
        } else if (key == "schemes") {
            sw.schemes = detail::split_list(val);
        } else {
            throw std::runtime_error("sweep: unknown key '" + key + "'");
        }
    }
    if (sw.axis_values.empty()) throw std::runtime_error("sweep: axis_values required");
    if (sw.trials_per_point < 1) throw std::runtime_error("sweep: trials_per_point must be >= 1");
    if (sw.schemes.empty()) throw std::runtime_error("sweep: at least one scheme required");
    for (const std::string& s : sw.schemes) {
        const auto& known = known_scheme_names();
        bool ok = false;
        for (const std::string& k : known) ok = ok || (k == s);
        if (!ok) throw std::runtime_error("sweep: unknown scheme '" + s + "'");
    }
    return sw;
}

inline SweepSpec parse_sweep_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open sweep file: " + path);
    return parse_sweep(f);
}

// Re-emits a configuration in the file schema (dB/dBm domain). Used for the
// config snapshot embedded in result files; numeric round trip is within
// 1e-9 relative.
inline std::map<std::string, std::string> config_to_kv(const ScenarioConfig& c) {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return std::string(buf);
    };
    std::map<std::string, std::string> kv;
    kv["n_antennas"] = std::to_string(c.n_antennas);
    kv["n_video_receivers"] = std::to_string(c.n_video);
    kv["n_idle"] = std::to_string(c.n_idle);
    kv["n_basic"] = std::to_string(c.n_basic);
    kv["n_layers"] = std::to_string(c.n_layers);
    kv["n_eavesdroppers"] = std::to_string(c.n_eavesdroppers);
    std::string reqs;
    for (std::size_t i = 0; i < c.sinr_req.size(); ++i)
        reqs += (i ? ", " : "") + fmt(linear_to_db(c.sinr_req[i]));
    kv["sinr_req_db"] = reqs;
    kv["sinr_tol_db"] = fmt(linear_to_db(c.sinr_tol1));
    kv["kappa"] = fmt(c.kappa);
    kv["noise_dbm"] = fmt(watts_to_dbm(c.noise_w));
    kv["harvest_floor_dbm"] = fmt(watts_to_dbm(c.harvest_floor_w));
    kv["harvest_eff"] = fmt(c.harvest_eff);
    kv["carrier_hz"] = fmt(c.carrier_hz);
    kv["ref_distance_m"] = fmt(c.ref_distance_m);
    kv["max_distance_m"] = fmt(c.max_distance_m);
    kv["antenna_gain_dbi"] = fmt(c.antenna_gain_dbi);
    kv["rician_k_db"] = fmt(linear_to_db(c.rician_k));
    kv["eav_noise_norm"] = fmt(c.eav_noise_norm);
    kv["pl_breakpoint_m"] = fmt(c.pl_breakpoint_m);
    kv["pl_slope_near"] = fmt(c.pl_slope_near);
    kv["pl_slope_far"] = fmt(c.pl_slope_far);
    kv["seed"] = std::to_string(c.seed);
    kv["n_rand"] = std::to_string(c.n_rand);
    kv["n_chance_samples"] = std::to_string(c.n_chance_samples);
    return kv;
}

}  // namespace secbeam
