#pragma once

#include <chrono>
#include <future>

#include "frobcurv/oneprime.hpp"
#include "frobcurv/reduced.hpp"
#include "frobcurv/unitary.hpp"

namespace frobcurv {

struct VerifyParams {
    std::vector<long> primes{3, 5, 7};
    std::vector<long> pair_primes{3, 5, 7, 11};
    int precision = 5;
};

struct TargetOutcome {
    TargetOutcome() = default;
    explicit TargetOutcome(std::string id_) : id(std::move(id_)) {}
    std::string id;
    bool pass = true;
    std::vector<std::string> lines;
    double seconds = 0.0;
};

namespace verify_detail {

inline void require(TargetOutcome& out, bool cond, const std::string& what) {
    out.lines.push_back(std::string(cond ? "  ok: " : "  FAIL: ") + what);
    if (!cond) out.pass = false;
}

inline std::vector<std::pair<long, long>> distinct_pairs(const std::vector<long>& ps) {
    std::vector<std::pair<long, long>> out;
    for (long a : ps)
        for (long b : ps)
            if (a != b) out.emplace_back(a, b);
    return out;
}

inline std::vector<FormMatrix> split_forms_for(int n) {
    std::vector<FormMatrix> out;
    if (n % 2 == 0) {
        out.push_back(split_form(SplitKind::Symplectic, n));
        out.push_back(split_form(SplitKind::SymEven, n));
    } else {
        out.push_back(split_form(SplitKind::SymOdd, n));
    }
    return out;
}

inline std::string form_label(const FormMatrix& q) {
    return std::string("n=") + std::to_string(q.n) + (q.sign == 1 ? " sym" : " alt");
}

/// c * (Q_i - T_ii T_{i+r,i+r}) as a series, i is 1-based, n = 2r.
inline Series<CycScalar> mixed_diag_expected(int n, int i, int sign, const mpq_class& c, int order,
                                             const CycScalar& proto) {
    const int r = n / 2, arity = n * n;
    auto var = [&](int a, int b) { return Series<CycScalar>::variable(arity, order, (a - 1) * n + (b - 1), proto); };
    Series<CycScalar> qi = Series<CycScalar>::zero(arity, order, proto);
    for (int k = 1; k <= r; ++k) {
        auto term = var(k, i) * var(k + r, i + r);
        auto term2 = var(k + r, i) * var(k, i + r);
        qi += sign == 1 ? term + term2 : term - term2;
    }
    return (qi - var(i, i) * var(i + r, i + r)).scaled(c);
}

}  // namespace verify_detail

using TargetFn = std::function<TargetOutcome(const VerifyParams&)>;

struct VerifyTarget {
    std::string id;
    std::string statement;
    TargetFn run;
};

inline std::vector<VerifyTarget> verify_targets() {
    using namespace verify_detail;
    std::vector<VerifyTarget> ts;

    ts.push_back({"thm-4.8", "pair congruence: g_{pp'}(v,1) = +-(pp'/16)(p'-p) v^2 mod v^3", [](const VerifyParams& prm) {
        TargetOutcome out{"thm-4.8"};
        for (auto sign : {PolySign::Upper, PolySign::Lower})
            for (auto [p, p2] : distinct_pairs(prm.pair_primes)) {
                auto g = g_poly({p, p2}, sign);
                auto c = congruence_extract(g);
                mpq_class expected = mpq_class(p * p2, 16) * (p2 - p);
                if (sign == PolySign::Lower) expected = -expected;
                bool ok = c[0] == 0 && c[1] == 0 && c[2] == expected;
                require(out, ok,
                        "g_{" + std::to_string(p) + "," + std::to_string(p2) + "}(v,1) = (" + mpq_str(c[2]) +
                            ") v^2 mod v^3, expected (" + mpq_str(expected) + ") [" +
                            (sign == PolySign::Upper ? "upper" : "lower") + "]");
            }
        return out;
    }});

    ts.push_back({"lemma-4.2",
                  "triple congruence: 2 g_{pp'p''}(v,1) = -(pp'p''/32)(p''-2)(p'-p) v^2 mod v^3 (upper sign)",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"lemma-4.2"};
        for (long p : prm.primes)
            for (long p2 : prm.primes)
                for (long p3 : prm.primes) {
                    auto g = g_poly({p, p2, p3}, PolySign::Upper);
                    auto c = congruence_extract(g);
                    mpq_class expected = mpq_class(-(p * p2 * p3), 32) * (p3 - 2) * (p2 - p) / 2;
                    bool ok = c[0] == 0 && c[1] == 0 && c[2] == expected;
                    require(out, ok,
                            "2 g_{" + std::to_string(p) + "," + std::to_string(p2) + "," + std::to_string(p3) +
                                "}(v,1) = (" + mpq_str(c[2] * 2) + ") v^2 mod v^3");
                }
        return out;
    }});

    ts.push_back({"thm-2.7", "defining diagrams commute and the lift fixes 1, with diagonal linear part p*T_ii",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-2.7"};
        for (int n : {1, 2, 3, 4})
            for (const auto& q : split_forms_for(n))
                for (long p : prm.primes) {
                    int order = 4;
                    auto lift = chern_lift(q, p, order);
                    bool fixes1 = true;
                    for (int i = 0; i < n; ++i)
                        for (int j = 0; j < n; ++j) fixes1 &= lift.image(i, j).constant_term().is_zero();
                    auto lin = check_linear_part_diagonal(lift);
                    auto hq = verify_hq_diagram(q, lift);
                    auto bq = verify_bq_diagram(q, lift);
                    bool ok = fixes1 && lin.ok && hq.ok && bq.ok;
                    std::string msg = form_label(q) + " p=" + std::to_string(p) + " nu=" + std::to_string(order);
                    if (!ok)
                        msg += " [" + (fixes1 ? (lin.ok ? (hq.ok ? bq.witness : hq.witness) : lin.witness)
                                              : std::string("constant term nonzero")) + "]";
                    require(out, ok, msg);
                }
        return out;
    }});

    ts.push_back({"thm-3.1.1", "the lift attached to a split form is global along 1", [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.1.1"};
        for (int n : {1, 2, 3, 4})
            for (const auto& q : split_forms_for(n))
                for (long p : prm.primes) {
                    int order = 4;
                    auto lift = chern_lift(q, p, order);
                    auto glob = globality_check(lift);
                    require(out, glob.ok, form_label(q) + " p=" + std::to_string(p) + (glob.ok ? "" : ": " + glob.witness));
                }
        // converse-style witness: a non-root-of-unity form must fail
        auto cfg = RingConfig::rationals();
        std::vector<CycScalar> e{CycScalar(mpq_class(0)), CycScalar(mpq_class(2)), CycScalar(mpq_class(-2)),
                                 CycScalar(mpq_class(0))};
        FormMatrix q2(2, -1, std::move(e), cfg);
        auto lift2 = chern_lift(q2, 3, 3);
        auto glob2 = globality_check(lift2);
        require(out, !glob2.ok, "q=[[0,2],[-2,0]] is NOT global along 1 (" + glob2.witness + ")");
        return out;
    }});

    ts.push_back({"thm-3.1.3", "for q=1, n=2r the lift preserves the unitary block shape and its ideal",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.1.3"};
        for (long p : prm.primes) {
            auto emb = uc_embedding_consistency(p, 8);
            require(out, emb.ok, "block restriction reproduces the quotient-ring lift, p=" + std::to_string(p) +
                                     (emb.ok ? "" : ": " + emb.witness));
            auto phi = uc_lift_p(p, 10);
            require(out, uc_relation_preserved(phi, 10),
                    "2a+a^2+b^2 maps to 0 in the quotient, p=" + std::to_string(p));
        }
        return out;
    }});

    ts.push_back({"thm-3.2.1", "curvature does not vanish for n>=4: corner reduction certificate",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.2.1"};
        for (auto kind : {SplitKind::SymEven, SplitKind::Symplectic}) {
            auto q = split_form(kind, 4);
            auto cc = corner_consistency(q, 3, 4);
            require(out, cc.ok, "corner consistency n=4 p=3 nu=4 " + form_label(q) + (cc.ok ? "" : ": " + cc.witness));
        }
        for (auto sign : {PolySign::Upper, PolySign::Lower})
            for (auto [p, p2] : distinct_pairs(prm.primes)) {
                if (p2 < p) continue;
                auto g = g_poly({p, p2}, sign);
                bool nz = !g.is_zero();
                auto val_p = g.min_val_p(p), val_p2 = g.min_val_p(p2);
                bool divisible = val_p && *val_p >= 1 && val_p2 && *val_p2 >= 1;
                mpq_class expected = mpq_class(p * p2, 16) * (p2 - p);
                if (sign == PolySign::Lower) expected = -expected;
                bool cong = congruence_extract(g)[2] == expected;
                require(out, nz && divisible && cong,
                        "g_{" + std::to_string(p) + "," + std::to_string(p2) +
                            "} is a nonzero certificate divisible by pp' with the degree-2 value (" +
                            mpq_str(expected) + ") (graded degree " + std::to_string(g.total_degree()) + ")");
            }
        return out;
    }});

    ts.push_back({"thm-3.2.2", "curvature graded piece at degree 2 vanishes for even split forms",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.2.2"};
        for (int n : {2, 4})
            for (const auto& q : split_forms_for(n))
                for (auto [p, p2] : distinct_pairs(prm.primes)) {
                    if (p2 < p) continue;
                    auto rep = curvature2(q, p, p2, 2);
                    bool ok = graded_piece(rep, 2).is_zero();
                    require(out, ok, form_label(q) + " (p,p')=(" + std::to_string(p) + "," + std::to_string(p2) +
                                         "): phi^(2) = 0" + (ok ? "" : " FAILS: " + rep.witness));
                }
        return out;
    }});

    ts.push_back({"thm-3.2.3", "n=2 symplectic curvature vanishes; lambda closed form matches and commutes",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.2.3"};
        auto q = split_form(SplitKind::Symplectic, 2);
        for (int order : {5, 7})
            for (auto [p, p2] : distinct_pairs(prm.primes)) {
                if (p2 < p) continue;
                auto rep = curvature2(q, p, p2, order);
                require(out, rep.is_zero(), "curvature2 = 0 at nu=" + std::to_string(order) + " for (p,p')=(" +
                                                std::to_string(p) + "," + std::to_string(p2) + ")" +
                                                (rep.is_zero() ? "" : " witness " + rep.witness));
            }
        auto lift = chern_lift(q, 3, 4);
        auto closed = lambda_closed_lift(3, 4);
        require(out, lift.phi0 == closed.phi0, "chern lift equals lambda_p(x) x^{(p)} at p=3, nu=4");
        auto c1 = lambda_closed_lift(3, 5), c2 = lambda_closed_lift(5, 5);
        require(out, commutator_on_generators(c1, c2).is_zero(), "closed-form lifts commute at nu=5, (3,5)");
        return out;
    }});

    ts.push_back({"thm-3.2.4", "n=1 curvature vanishes", [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.2.4"};
        auto q = split_form(SplitKind::SymOdd, 1);
        for (int order : {5, 7})
            for (auto [p, p2] : distinct_pairs(prm.primes)) {
                if (p2 < p) continue;
                auto rep = curvature2(q, p, p2, order);
                require(out, rep.is_zero(), "curvature2 = 0 at nu=" + std::to_string(order) + " for (p,p')=(" +
                                                std::to_string(p) + "," + std::to_string(p2) + ")");
            }
        return out;
    }});

    ts.push_back({"thm-3.4", "special orthogonal curvature: n=2 vanishes, n=6 does not (unipotent reduction)",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.4"};
        auto torus = so_torus_check(prm.primes[0], prm.primes[1], 6);
        require(out, torus.ok, "r=1 torus: Sigma_p(a)=a^p and the lifts commute (n=2 vanishing)");
        for (long p : {3L, 5L}) {
            auto uni = so_unipotent_check(p, static_cast<int>(2 * p));
            require(out, uni.ok, "3x3 unipotent formula has corner f_p(v, uw-v) at p=" + std::to_string(p) +
                                     (uni.ok ? "" : ": " + uni.witness));
        }
        auto comp = so_unipotent_composition(3, 5);
        require(out, comp.matches_composed, "composition lands on f_{pp'}(v, uw-v) for (3,5)");
        require(out, comp.commutator_matches_g && comp.commutator_nonzero,
                "commutator equals g_{pp'}(v, uw-v) != 0: SO curvature nonzero for n=6");
        return out;
    }});

    ts.push_back({"thm-3.5", "3-curvature nonvanishing for split symmetric forms via the corner model",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-3.5"};
        long p = prm.primes[0], p2 = prm.primes[1], p3 = prm.primes[2];
        auto lhs = corner_three_commutator(p, p2, p3, PolySign::Upper);
        auto rhs = g_poly({p3, p2, p}, PolySign::Upper);
        require(out, lhs == rhs, "p'p'' phi_{pp'p''}(B_ij) = g_{p''p'p}(B_ij,B_ji) under corner reduction (3,5,7)");
        for (long a : prm.primes)
            for (long b : prm.primes)
                for (long c : prm.primes) {
                    if (b == c) continue;  // nonvanishing claimed for p' != p''
                    auto g = g_poly({c, b, a}, PolySign::Upper);
                    auto coeffs = congruence_extract(g);
                    require(out, coeffs[2] != 0,
                            "mod-v^3 certificate of g_{" + std::to_string(c) + "," + std::to_string(b) + "," +
                                std::to_string(a) + "} is nonzero (triple (" + std::to_string(a) + "," +
                                std::to_string(b) + "," + std::to_string(c) + "))");
                }
        return out;
    }});

    ts.push_back({"thm-3.6", "mixed (1,1)-curvature: phi^(1)=0, phi^(2)!=0, with explicit mod (T)^3 diagonal",
                  [](const VerifyParams&) {
        TargetOutcome out{"thm-3.6"};
        for (auto kind : {SplitKind::SymEven, SplitKind::Symplectic}) {
            auto q = split_form(kind, 2);
            for (auto [p, p2] : {std::pair<long, long>{3, 5}, {3, 3}}) {
                auto rep = curvature11(q, p, p2, 2);
                mpq_class c = (p == p2) ? mpq_class(p, 2) : mpq_class(1, 2);
                bool ok = true;
                std::string why;
                for (int i = 1; i <= 1; ++i) {
                    auto expect = mixed_diag_expected(2, i, q.sign, c, 2, rep.entries.proto());
                    if (!(rep.entries.at(i - 1, i - 1) == expect) || !(rep.entries.at(i, i) == expect)) {
                        ok = false;
                        why = "diagonal congruence fails";
                    }
                }
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        if (i != j && !rep.entries.at(i, j).is_zero()) {
                            ok = false;
                            why = "off-diagonal entry nonzero mod (T)^3";
                        }
                if (!graded_piece(rep, 1).is_zero()) { ok = false; why = "phi^(1) != 0"; }
                if (graded_piece(rep, 2).is_zero()) { ok = false; why = "phi^(2) = 0"; }
                require(out, ok, form_label(q) + " (p,p')=(" + std::to_string(p) + "," + std::to_string(p2) + ")" +
                                     (ok ? "" : ": " + why));
            }
        }
        return out;
    }});

    ts.push_back({"thm-3.7", "unitary (1,1)-curvature is nonzero for all p,p'", [](const VerifyParams&) {
        TargetOutcome out{"thm-3.7"};
        for (auto [p, p2] : {std::pair<long, long>{3, 5}, {3, 3}, {5, 5}}) {
            auto cc = coefficient_contradiction(p, p2);
            bool ok = cc.lhs_alpha == 2 * p * p2 && cc.rhs_alpha == 4 * p * p2 && !cc.polynomials_equal;
            require(out, ok, "alpha coefficients " + cc.lhs_alpha.get_str() + " vs " + cc.rhs_alpha.get_str() +
                                 " for (p,p')=(" + std::to_string(p) + "," + std::to_string(p2) + ")");
        }
        auto comm = uc_commutator_check(3, 5, 3);
        require(out, comm.nonzero, "quotient-ring commutator nonzero at nu=3 (witness " + comm.witness + ")");
        require(out, uc_relation_preserved(uc_lift_p(3, 8), 8), "lift preserves the relation 2a+a^2+b^2");
        return out;
    }});

    ts.push_back({"thm-5.1", "one-prime (1,1)-curvature at the identity: closed form, n=1 series, vanishing criterion",
                  [](const VerifyParams& prm) {
        TargetOutcome out{"thm-5.1"};
        auto run_case = [&](const FormMatrix& q, long p, int k, const std::string& label) {
            auto rhs = rhs_sunny(q, p, k);
            auto lhs = lhs_engine(q, p, 2, k);
            bool ok = padic_matrices_congruent(rhs, lhs.value_at_1, k - 1);
            require(out, ok, "rhs = lhs constant term mod p^" + std::to_string(k - 1) + " for " + label);
            return rhs;
        };
        {
            std::vector<CycScalar> e{CycScalar(mpq_class(2))};
            FormMatrix q(1, 1, std::move(e), RingConfig::rationals());
            auto rhs = run_case(q, 3, prm.precision, "n=1 q=2 p=3");
            auto expected = PadicScalar::from_long(3, prm.precision - 1, -2);
            require(out, (rhs.at(0, 0) - expected).is_zero(), "n=1 q=2 p=3 value is -2");
        }
        {
            std::vector<CycScalar> e{CycScalar(mpq_class(3))};
            FormMatrix q(1, 1, std::move(e), RingConfig::rationals());
            run_case(q, 5, 4, "n=1 q=3 p=5");
        }
        {
            std::vector<CycScalar> e{CycScalar(mpq_class(0)), CycScalar(mpq_class(2)), CycScalar(mpq_class(-2)),
                                     CycScalar(mpq_class(0))};
            FormMatrix q(2, -1, std::move(e), RingConfig::rationals());
            auto rhs = run_case(q, 3, prm.precision, "n=2 q=[[0,2],[-2,0]] p=3");
            auto m2 = PadicScalar::from_long(3, prm.precision - 1, -2);
            bool diag = (rhs.at(0, 0) - m2).is_zero() && (rhs.at(1, 1) - m2).is_zero() && rhs.at(0, 1).is_zero() &&
                        rhs.at(1, 0).is_zero();
            require(out, diag, "n=2 value is -2 * identity");
        }
        {
            auto id = n1_identity_check(mpq_class(2), 3, 3, 4);
            require(out, id.ok, "n=1 series identity Phi = Phi(1) x^{p^2} (q=2, p=3, nu=3, k=4)" +
                                    (id.ok ? std::string() : ": " + id.witness));
        }
        for (long p : {3L, 5L}) {
            for (const mpq_class& qv : {mpq_class(1), mpq_class(-1), mpq_class(2), mpq_class(3), mpq_class(1, 2)}) {
                if (mpq_val_p(qv, p) != 0) continue;  // q must be a p-adic unit
                std::vector<CycScalar> e{CycScalar(qv)};
                FormMatrix q(1, 1, std::move(e), RingConfig::rationals());
                auto rhs = rhs_sunny(q, p, prm.precision);
                bool is_root = qv == 1 || qv == -1;
                require(out, rhs.is_zero() == is_root,
                        "vanishing criterion: q=" + mpq_str(qv) + " p=" + std::to_string(p) + " -> " +
                            (rhs.is_zero() ? "0" : "nonzero"));
            }
            auto qsplit = split_form(SplitKind::SymEven, 2);
            auto rhs = rhs_sunny(qsplit, p, prm.precision);
            require(out, rhs.is_zero(), "split form gives 0 at p=" + std::to_string(p));
        }
        return out;
    }});

    return ts;
}

inline std::vector<std::string> verify_target_ids() {
    std::vector<std::string> ids;
    for (const auto& t : verify_targets()) ids.push_back(t.id);
    return ids;
}

inline TargetOutcome timed(const VerifyTarget& t, const VerifyParams& params) {
    auto start = std::chrono::steady_clock::now();
    TargetOutcome out;
    try {
        out = t.run(params);
    } catch (const std::exception& e) {
        out.id = t.id;
        out.pass = false;
        out.lines.push_back(std::string("  FAIL: exception: ") + e.what());
    }
    out.id = t.id;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

/// Run the given targets (all when empty), concurrently, output ordered by id.
inline std::vector<TargetOutcome> run_verify(const std::vector<std::string>& ids, const VerifyParams& params,
                                             unsigned threads) {
    auto all = verify_targets();
    for (const auto& id : ids)
        if (std::none_of(all.begin(), all.end(), [&](const VerifyTarget& t) { return t.id == id; }))
            throw std::invalid_argument("unknown verify target: " + id);
    std::vector<const VerifyTarget*> sel;
    for (const auto& t : all)
        if (ids.empty() || std::find(ids.begin(), ids.end(), t.id) != ids.end()) sel.push_back(&t);
    std::sort(sel.begin(), sel.end(), [](const VerifyTarget* a, const VerifyTarget* b) { return a->id < b->id; });
    std::vector<TargetOutcome> results(sel.size());
    if (threads <= 1) {
        for (size_t i = 0; i < sel.size(); ++i) results[i] = timed(*sel[i], params);
    } else {
        std::vector<std::future<TargetOutcome>> futs;
        futs.reserve(sel.size());
        for (const auto* t : sel)
            futs.push_back(std::async(std::launch::async, [t, &params] { return timed(*t, params); }));
        for (size_t i = 0; i < futs.size(); ++i) results[i] = futs[i].get();
    }
    return results;
}

}  // namespace frobcurv
