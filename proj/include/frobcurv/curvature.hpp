#pragma once

#include "frobcurv/chern.hpp"

namespace frobcurv {

enum class CurvatureKind { Curvature, Three, Mixed, SO, Unitary };

inline const char* kind_name(CurvatureKind k) {
    switch (k) {
        case CurvatureKind::Curvature: return "curvature";
        case CurvatureKind::Three: return "three";
        case CurvatureKind::Mixed: return "mixed";
        case CurvatureKind::SO: return "so";
        case CurvatureKind::Unitary: return "unitary";
    }
    return "?";
}

/**
 * Values of a curvature operator on the generators T_ij, after the
 * definitional division has been carried out with verified witnesses.
 */
struct CurvatureReport {
    CurvatureReport(CurvatureKind kind_, int n_, int order_, std::vector<long> primes_,
                    SeriesMatrix<CycScalar> entries_)
        : kind(kind_), n(n_), order(order_), primes(std::move(primes_)), entries(std::move(entries_)) {}

    CurvatureKind kind;
    int n;
    int order;
    std::vector<long> primes;
    SeriesMatrix<CycScalar> entries;
    std::optional<int> leading_degree;
    std::string divisibility = "ok";  // div_exact_int never returns on violation
    std::string witness;              // lowest nonzero monomial, when any
    mpz_class divisor = 1;            // the definitional denominator divided out
    std::vector<long> div_witnesses;  // primes whose powers were certified

    bool is_zero() const { return !leading_degree.has_value(); }
};

/// phi_p applied to a series: sigma_p on coefficients, then T -> Phi0.
inline Series<CycScalar> apply_lift(const Series<CycScalar>& f, const FrobLift& lift) {
    if (f.arity() != lift.n * lift.n || f.order() != lift.order)
        throw std::invalid_argument("apply_lift: shape mismatch");
    Series<CycScalar> g = lift.galois_on_coeffs ? galois_map(f, lift.p) : f;
    std::vector<Series<CycScalar>> images;
    images.reserve(static_cast<size_t>(f.arity()));
    for (int i = 0; i < lift.n; ++i)
        for (int j = 0; j < lift.n; ++j) images.push_back(lift.image(i, j));
    return g.substitute(images);
}

/// [phi_a, phi_b] evaluated on the generator matrix T.
inline SeriesMatrix<CycScalar> commutator_on_generators(const FrobLift& a, const FrobLift& b) {
    if (a.n != b.n || a.order != b.order) throw std::invalid_argument("commutator: shape mismatch");
    SeriesMatrix<CycScalar> out(a.n, a.n * a.n, a.order, a.phi0.proto());
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j)
            out.at(i, j) = apply_lift(b.image(i, j), a) - apply_lift(a.image(i, j), b);
    return out;
}

namespace detail {
inline void finalize_report(CurvatureReport& rep) {
    std::optional<int> lead;
    std::string witness;
    for (int i = 0; i < rep.n; ++i)
        for (int j = 0; j < rep.n; ++j) {
            auto ld = rep.entries.at(i, j).leading_degree();
            if (ld && (!lead || *ld < *lead)) {
                lead = ld;
                const auto& t = rep.entries.at(i, j).terms().front();
                witness = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): (" + t.coeff.str() +
                          ")*" + rep.entries.at(i, j).monomial_str(t.idx, [&](int v) {
                              return "T_" + std::to_string(v / rep.n + 1) + std::to_string(v % rep.n + 1);
                          });
            }
        }
    rep.leading_degree = lead;
    rep.witness = witness;
}

inline void require_exact(const FrobLift& l, const char* who) {
    if (!l.exact)
        throw std::invalid_argument(std::string(who) +
                                    ": lift coefficients are p-adic approximations; curvature reports require the "
                                    "exact (root-of-unity form) path");
}
}  // namespace detail

/// phi_{pp'} = (1/pp') [phi_p, phi_{p'}], p != p'.
inline CurvatureReport curvature2(const FormMatrix& q, long p, long p2, int order) {
    if (p == p2) throw std::invalid_argument("curvature2: needs distinct primes");
    auto lp = chern_lift(q, p, order);
    auto lp2 = chern_lift(q, p2, order);
    detail::require_exact(lp, "curvature2");
    detail::require_exact(lp2, "curvature2");
    auto num = commutator_on_generators(lp, lp2);
    CurvatureReport rep{CurvatureKind::Curvature, q.n, order, {p, p2},
                        SeriesMatrix<CycScalar>(q.n, q.n * q.n, order, lp.phi0.proto())};
    rep.divisor = mpz_class(p) * mpz_class(p2);
    rep.div_witnesses = {p, p2};
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j)
            rep.entries.at(i, j) = div_exact_int(num.at(i, j), rep.divisor, rep.div_witnesses);
    detail::finalize_report(rep);
    return rep;
}

/// phi_{pp'p''} = (1/p'p'') [phi_p, [phi_{p'}, phi_{p''}]].
inline CurvatureReport curvature3(const FormMatrix& q, long p, long p2, long p3, int order) {
    auto lp = chern_lift(q, p, order);
    auto lp2 = chern_lift(q, p2, order);
    auto lp3 = chern_lift(q, p3, order);
    detail::require_exact(lp, "curvature3");
    detail::require_exact(lp2, "curvature3");
    detail::require_exact(lp3, "curvature3");
    CurvatureReport rep{CurvatureKind::Three, q.n, order, {p, p2, p3},
                        SeriesMatrix<CycScalar>(q.n, q.n * q.n, order, lp.phi0.proto())};
    rep.divisor = mpz_class(p2) * mpz_class(p3);
    rep.div_witnesses = (p2 == p3) ? std::vector<long>{p2} : std::vector<long>{p2, p3};
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j) {
            // [phi_p, C](T_ij) with C = [phi_{p'}, phi_{p''}]
            auto c_on_gen = apply_lift(lp3.image(i, j), lp2) - apply_lift(lp2.image(i, j), lp3);
            auto first = apply_lift(c_on_gen, lp);
            auto second = apply_lift(apply_lift(lp.image(i, j), lp3), lp2) -
                          apply_lift(apply_lift(lp.image(i, j), lp2), lp3);
            rep.entries.at(i, j) = div_exact_int(first - second, rep.divisor, rep.div_witnesses);
        }
    detail::finalize_report(rep);
    return rep;
}

/**
 * (1,1)-curvature against the trivial connection:
 * phi_{p pbar'} = (1/pp') [phi_p, phi_{pbar'}] for p != p', and
 * phi_{p pbar}  = (1/p)   [phi_p, phi_{pbar}].
 */
inline CurvatureReport curvature11(const FormMatrix& q, long p, long p2, int order) {
    auto lp = chern_lift(q, p, order);
    detail::require_exact(lp, "curvature11");
    auto lbar = trivial_lift(p2, q.n, order, q.cfg);
    auto num = commutator_on_generators(lp, lbar);
    CurvatureReport rep{CurvatureKind::Mixed, q.n, order, {p, p2},
                        SeriesMatrix<CycScalar>(q.n, q.n * q.n, order, lp.phi0.proto())};
    rep.divisor = (p == p2) ? mpz_class(p) : mpz_class(p) * mpz_class(p2);
    rep.div_witnesses = (p == p2) ? std::vector<long>{p} : std::vector<long>{p, p2};
    for (int i = 0; i < q.n; ++i)
        for (int j = 0; j < q.n; ++j)
            rep.entries.at(i, j) = div_exact_int(num.at(i, j), rep.divisor, rep.div_witnesses);
    detail::finalize_report(rep);
    return rep;
}

/// The induced map on I/I^{mu+1}, evaluated on the generators.
inline SeriesMatrix<CycScalar> graded_piece(const CurvatureReport& rep, int mu) {
    if (mu > rep.order) throw std::invalid_argument("graded_piece: degree beyond computed order");
    return rep.entries.truncated(mu);
}

}  // namespace frobcurv
