#pragma once

#include <fstream>

#include <json.hpp>

#include "frobcurv/curvature.hpp"

namespace frobcurv {

using ordered_json = nlohmann::ordered_json;

inline std::function<std::string(int)> full_ring_namer(int n) {
    return [n](int v) { return "T_" + std::to_string(v / n + 1) + std::to_string(v % n + 1); };
}

inline ordered_json report_to_json(const CurvatureReport& rep) {
    auto namer = full_ring_namer(rep.n);
    ordered_json j;
    j["kind"] = kind_name(rep.kind);
    j["n"] = rep.n;
    j["p"] = rep.primes.size() > 0 ? rep.primes[0] : 0;
    if (rep.primes.size() > 1) j["p2"] = rep.primes[1];
    if (rep.primes.size() > 2) j["p3"] = rep.primes[2];
    j["order"] = rep.order;
    if (rep.leading_degree)
        j["leading_degree"] = *rep.leading_degree;
    else
        j["leading_degree"] = nullptr;
    ordered_json entries = ordered_json::array();
    for (int i = 0; i < rep.n; ++i)
        for (int jj = 0; jj < rep.n; ++jj) {
            const auto& s = rep.entries.at(i, jj);
            ordered_json e;
            e["i"] = i + 1;
            e["j"] = jj + 1;
            ordered_json terms = ordered_json::object();
            for (const auto& t : s.terms()) terms[s.monomial_str(t.idx, namer)] = t.coeff.str();
            e["terms"] = terms;
            entries.push_back(e);
        }
    j["entries"] = entries;
    j["divisibility"] = rep.divisibility;
    if (!rep.witness.empty()) j["witness"] = rep.witness;
    return j;
}

inline std::string report_emit(const CurvatureReport& rep, const std::string& format) {
    if (format == "json") return report_to_json(rep).dump(2) + "\n";
    if (format != "text") throw std::invalid_argument("report_emit: format must be json or text");
    auto namer = full_ring_namer(rep.n);
    std::ostringstream os;
    os << "kind: " << kind_name(rep.kind) << "  n=" << rep.n << "  primes=";
    for (size_t i = 0; i < rep.primes.size(); ++i) os << (i ? "," : "") << rep.primes[i];
    os << "  order=" << rep.order << "\n";
    os << "leading_degree: " << (rep.leading_degree ? std::to_string(*rep.leading_degree) : "none (zero)") << "\n";
    os << "divisibility: " << rep.divisibility << " (divided by " << rep.divisor.get_str() << ")\n";
    if (!rep.witness.empty()) os << "witness: " << rep.witness << "\n";
    for (int i = 0; i < rep.n; ++i)
        for (int j = 0; j < rep.n; ++j) {
            const auto& s = rep.entries.at(i, j);
            if (s.is_zero()) continue;
            os << "phi(T_" << i + 1 << j + 1 << ") = " << s.render(namer) << "\n";
        }
    if (rep.is_zero()) os << "all entries vanish identically to the computed order\n";
    return os.str();
}

/// FORM file: {"n":2, "sign":-1, "entries":[["0","1"],["-1","0"]], "N":1, "M":2}
inline FormMatrix parse_form_json(const nlohmann::json& j) {
    long N = j.value("N", 1L);
    long M = j.value("M", 2L);
    auto cfg = (N == 1 && M == 2) ? RingConfig::rationals() : RingConfig::make(N, M);
    int n = j.at("n").get<int>();
    int sign = j.at("sign").get<int>();
    std::vector<CycScalar> entries;
    entries.reserve(static_cast<size_t>(n) * static_cast<size_t>(n));
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != n) throw std::invalid_argument("FORM file: wrong row count");
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("FORM file: wrong column count");
        for (const auto& cell : row) entries.push_back(CycScalar::parse(cfg, cell.get<std::string>()));
    }
    return FormMatrix(n, sign, std::move(entries), cfg);
}

inline FormMatrix load_form_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open FORM file " + path);
    nlohmann::json j;
    in >> j;
    return parse_form_json(j);
}

}  // namespace frobcurv
