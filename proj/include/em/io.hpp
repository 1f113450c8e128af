#pragma once

// Serialization of report types: JSON objects with a fixed field order and
// big integers rendered as decimal strings, plus TSV writers for the bulk
// dump formats.

#include "em/cf.hpp"
#include "em/helpful.hpp"
#include "em/moser.hpp"
#include "em/orders.hpp"
#include "em/primes.hpp"
#include "em/variants.hpp"

#include <json.hpp>

namespace em::io {

using json = nlohmann::ordered_json;

inline json rat_json(const Rat& r) {
    json j;
    j["num"] = r.get_num().get_str();
    j["den"] = r.get_den().get_str();
    return j;
}

inline json bounded_json(const BoundedReal& b) {
    json j;
    j["midpoint"] = b.to_string();
    j["digits"] = b.digits;
    j["error_bound"] = rat_json(b.err);
    return j;
}

inline json candidate_report_json(const moser::CandidateReport& r) {
    json j;
    j["m"] = r.m;
    json ids;
    auto id = [](const moser::IdentityCheck& c) {
        json v;
        v["verdict"] = c.integral ? "integer" : "non-integer";
        v["lhs"] = rat_json(c.lhs);
        return v;
    };
    ids["m8"] = id(r.m8);
    ids["m13"] = id(r.m13);
    ids["m16"] = id(r.m16);
    ids["m18"] = id(r.m18);
    ids["newbee"] = id(r.newbee);
    j["identities"] = ids;
    j["joint"] = r.joint;
    j["degenerate"] = r.degenerate;
    json sf;
    sf["m_minus_1"] = r.sf_m_minus_1;
    sf["m_plus_1"] = r.sf_m_plus_1;
    if (r.sf_m_plus_1_half)
        sf["m_plus_1_half"] = *r.sf_m_plus_1_half;
    else
        sf["m_plus_1_half"] = nullptr;
    sf["2m_minus_1"] = r.sf_2m_minus_1;
    sf["2m_plus_1"] = r.sf_2m_plus_1;
    j["squarefree"] = sf;
    j["m_mod_8"] = r.m_mod_8;
    j["m_mod_3"] = r.m_mod_3;
    auto pp = [](const std::vector<moser::PerPrimeCheck>& v) {
        json a = json::array();
        for (auto& c : v) {
            json e;
            e["p"] = c.p;
            e["holds"] = c.holds;
            a.push_back(e);
        }
        return a;
    };
    j["per_prime_m5"] = pp(r.m5);
    j["per_prime_m12"] = r.m12_applicable ? pp(r.m12) : json(nullptr);
    j["per_prime_m15"] = pp(r.m15);
    j["per_prime_2m_plus_1"] = pp(r.m18p);
    j["lhs_m19"] = rat_json(r.lhs_m19);
    j["lhs_m19_decimal"] = decimal_string(r.lhs_m19, 6);
    j["lhs_improvement"] = rat_json(r.lhs_improvement);
    j["lhs_improvement_decimal"] = decimal_string(r.lhs_improvement, 6);
    return j;
}

inline json cascade_json(const helpful::CascadeState& st) {
    json j;
    j["target"] = st.target;
    j["proven"] = st.proven;
    j["reached"] = st.reached;
    if (!st.reached) j["stall_reason"] = st.stall_reason;
    json steps = json::array();
    for (auto& step : st.trace) {
        json s;
        s["prime_power"] = step.prime_power;
        json ex = json::array();
        for (auto& e : step.exclusions) {
            json x;
            x["residue_class"] = e.residue_class;
            x["p"] = e.p;
            x["excluded_r"] = e.residues;
            ex.push_back(x);
        }
        s["exclusions"] = ex;
        steps.push_back(s);
    }
    j["trace"] = steps;
    j["statement"] = st.reached
                         ? (std::to_string(st.proven) + " | k proven")
                         : ("proven divisor so far: " + std::to_string(st.proven));
    return j;
}

inline json recip_json(const primes::RecipThreshold& rt) {
    json j;
    j["count"] = rt.count;
    if (rt.p_max)
        j["p_max"] = *rt.p_max;
    else
        j["p_max"] = nullptr;
    j["sum"] = bounded_json(rt.sum);
    j["forced_factor_count"] = rt.forced_factor_count;
    j["p_forced"] = rt.p_forced;
    return j;
}

inline json magnitude_json(const primes::MagnitudeBound& b) {
    json j;
    j["exponent10"] = b.exponent10;
    j["leading"] = b.leading;
    j["analytic_fallback"] = b.analytic;
    j["x_used"] = rat_json(b.x_used);
    return j;
}

inline json theorem3_json(const cf::Theorem3Result& r) {
    json j;
    j["N"] = r.N;
    j["found"] = r.found;
    if (r.found) {
        j["j"] = r.j;
        j["q_j"] = r.qj.get_str();
        j["bound"] = rat_json(r.bound);
    }
    j["budget_exhausted"] = r.budget_exhausted;
    if (r.budget_exhausted) j["exhausted_reason"] = r.exhausted_reason;
    j["quotients_certified"] = r.quotients_certified;
    j["digits_used"] = r.digits_used;
    json ex = json::array();
    for (auto& c : r.examined) {
        json e;
        e["j"] = c.j;
        e["qj_digits"] = c.qj_digits;
        e["cond_a"] = c.cond_a;
        e["cond_b"] = c.cond_b;
        e["cond_c"] = c.cond_c;
        if (!c.note.empty()) e["note"] = c.note;
        ex.push_back(e);
    }
    j["examined"] = ex;
    return j;
}

inline json m2_json(const orders::M2Analysis& a) {
    json j;
    j["m"] = a.m;
    json w = json::array();
    for (auto& x : a.witnesses) {
        json e;
        e["p"] = x.p;
        e["forced_residue"] = x.forced_residue;
        e["modulus"] = x.modulus;
        w.push_back(e);
    }
    j["witnesses"] = w;
    if (a.tier_outer_exponent)
        j["bound_tier"] = "10^10^" + std::to_string(*a.tier_outer_exponent);
    else
        j["bound_tier"] = nullptr;
    j["newbee_lhs"] = rat_json(a.newbee_lhs);
    j["newbee_integral"] = a.newbee_integral;
    return j;
}

}  // namespace em::io
