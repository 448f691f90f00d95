// SPDX-License-Identifier: Apache-2.0
// Part of secbeam. Copyright (c) 2026 the secbeam authors.
#pragma once

// JSON encoding of configurations, realizations, solutions and verification
// reports. Complex numbers are [re, im] pairs; matrices are row-major arrays
// of such pairs. The config snapshot reuses the text-file schema verbatim so
// a result file round-trips through the same parser as a config file.

#include <json.hpp>

#include "secbeam/config_io.hpp"
#include "secbeam/evaluator.hpp"

#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace secbeam {

inline nlohmann::json to_json(const CVector& v) {
    nlohmann::json a = nlohmann::json::array();
    for (std::size_t i = 0; i < v.dim(); ++i) a.push_back({v[i].real(), v[i].imag()});
    return a;
}

inline CVector cvector_from_json(const nlohmann::json& a) {
    CVector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = {a.at(i).at(0).get<double>(), a.at(i).at(1).get<double>()};
    return v;
}

inline nlohmann::json to_json(const HermitianMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j)
            row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline HermitianMatrix matrix_from_json(const nlohmann::json& rows) {
    const std::size_t n = rows.size();
    HermitianMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows.at(i).size() != n)
            throw std::runtime_error("matrix_from_json: ragged rows");
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = {rows.at(i).at(j).at(0).get<double>(), rows.at(i).at(j).at(1).get<double>()};
    }
    m.require_hermitian();
    return m;
}

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
    return nlohmann::json(config_to_kv(c));
}

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    std::map<std::string, std::string> kv;
    for (const auto& [k, v] : j.items()) kv[k] = v.get<std::string>();
    return config_from_kv(kv);
}

inline ReceiverRole role_from_name(const std::string& n) {
    if (n == "premium") return ReceiverRole::premium;
    if (n == "basic") return ReceiverRole::basic;
    if (n == "idle") return ReceiverRole::idle;
    throw std::runtime_error("unknown receiver role '" + n + "'");
}

inline nlohmann::json realization_to_json(const ChannelRealization& real) {
    nlohmann::json j;
    j["trial_index"] = real.trial_index;
    nlohmann::json recs = nlohmann::json::array();
    for (const Receiver& r : real.receivers)
        recs.push_back({{"role", role_name(r.role)},
                        {"distance_m", r.distance_m},
                        {"h", to_json(r.h)}});
    j["receivers"] = std::move(recs);
    return j;
}

inline ChannelRealization realization_from_json(const nlohmann::json& j) {
    ChannelRealization real;
    real.trial_index = j.at("trial_index").get<std::uint64_t>();
    for (const auto& rj : j.at("receivers")) {
        Receiver r;
        r.role = role_from_name(rj.at("role").get<std::string>());
        r.distance_m = rj.at("distance_m").get<double>();
        r.h = cvector_from_json(rj.at("h"));
        real.receivers.push_back(std::move(r));
    }
    return real;
}

inline nlohmann::json solution_to_json(const BeamformingSolution& sol) {
    nlohmann::json j;
    j["total_power_w"] = sol.total_power;
    j["rank_one"] = sol.rank_one;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& w : sol.layer_covariances) layers.push_back(to_json(w));
    j["layers"] = std::move(layers);
    j["energy"] = to_json(sol.energy_covariance);
    if (sol.rank_one) {
        nlohmann::json bf = nlohmann::json::array();
        for (const auto& w : sol.beamformers) bf.push_back(to_json(w));
        j["beamformers"] = std::move(bf);
    }
    return j;
}

inline BeamformingSolution solution_from_json(const nlohmann::json& j) {
    std::vector<HermitianMatrix> layers;
    for (const auto& wj : j.at("layers")) layers.push_back(matrix_from_json(wj));
    return detail::covariances_to_solution(std::move(layers), matrix_from_json(j.at("energy")));
}

inline nlohmann::json outcome_to_json(const SchemeOutcome& o) {
    nlohmann::json j;
    j["scheme"] = scheme_name(o.scheme);
    j["status"] = status_name(o.status);
    j["iterations"] = o.iterations;
    if (o.candidates_tried > 0) {
        j["candidates_tried"] = o.candidates_tried;
        j["chosen_candidate"] = o.chosen_candidate;
    }
    j["passthrough"] = o.passthrough;
    if (o.status == SolveStatus::optimal) j["solution"] = solution_to_json(o.solution);
    return j;
}

inline nlohmann::json rank_report_to_json(const RankReport& r) {
    nlohmann::json j;
    j["layer_ranks"] = r.layer_ranks;
    j["energy_rank"] = r.energy_rank;
    j["w1_bound_ok"] = r.w1_bound_ok;
    j["rank_squared_sum"] = r.rank_squared_sum;
    j["rank_squared_bound"] = r.rank_squared_bound;
    j["sum_bound_applicable"] = r.sum_bound_applicable;
    j["sum_bound_ok"] = r.sum_bound_ok;
    j["phi"] = r.phi;
    return j;
}

inline nlohmann::json margins_to_json(const VerificationReport& rep) {
    nlohmann::json j;
    nlohmann::json entries = nlohmann::json::array();
    for (const MarginEntry& e : rep.entries)
        entries.push_back({{"constraint", e.constraint},
                           {"receiver", e.receiver},
                           {"layer", e.layer},
                           {"margin", e.margin}});
    j["entries"] = std::move(entries);
    j["min_margin"] = rep.min_margin;
    return j;
}

inline nlohmann::json chance_to_json(const ChanceMonteCarlo& mc) {
    return {{"n_samples", mc.n_samples},
            {"j_eavesdroppers", mc.j_eavesdroppers},
            {"p_hat", mc.p_hat},
            {"std_error", mc.std_error},
            {"secrecy_ok_fraction", mc.secrecy_ok_fraction},
            {"secrecy_target_bits", mc.secrecy_target_bits},
            {"worst_audience_rate_bits", mc.worst_audience_rate_bits}};
}

}  // namespace secbeam
