#include <doctest.h>

#include <random>

#include "frobcurv/reduced.hpp"

using namespace frobcurv;
using S = Series<CycScalar>;
using M = SeriesMatrix<CycScalar>;

namespace {
const CycScalar kQ = CycScalar(mpq_class(0));
}

TEST_CASE("f_p for p = 3") {
    auto f = fp_poly(3, PolySign::Upper);
    CHECK(f.coeff(3, 0) == 1);
    CHECK(f.coeff(2, 1) == mpq_class(3, 2));
    CHECK(f.coeff(1, 2) == mpq_class(3, 2));
    CHECK(f.coeff(0, 3) == 0);
    CHECK(f.total_degree() == 3);

    // w = 0 gives v^3; v = 0 gives 0
    CHECK(f.substituted(BiPoly::var_v(), BiPoly()).coeff(3, 0) == 1);
    CHECK(f.substituted(BiPoly::var_v(), BiPoly()).terms().size() == 1);
    CHECK(f.substituted(BiPoly(), BiPoly::var_w()).is_zero());
}

TEST_CASE("f_p degree and symmetrized sum") {
    std::mt19937 rng(3);
    for (long p : {3L, 5L, 7L}) {
        auto f = fp_poly(p, PolySign::Upper);
        CHECK(f.total_degree() == static_cast<int>(p));
        // f_p(v,w) + f_p(w,v) = (v+w)^p for the upper sign
        auto sum = f + f.swapped();
        auto vw = (BiPoly::var_v() + BiPoly::var_w()).pow(static_cast<unsigned long>(p));
        CHECK(sum == vw);
    }
}

TEST_CASE("pair composition") {
    auto f35 = compose_fp({3, 5}, PolySign::Upper);
    CHECK(f35.total_degree() == 15);
    // f_{pp'}(v, 0) = v^{pp'}
    auto at_w0 = f35.substituted(BiPoly::var_v(), BiPoly());
    CHECK(at_w0.terms().size() == 1);
    CHECK(at_w0.coeff(15, 0) == 1);
    // linear coefficient of f_{pp'}(v,1) is pp'/4
    auto c = f35.at_w1_coeffs(1);
    CHECK(c[1] == mpq_class(15, 4));
}

TEST_CASE("pair composition splits off the (v+w)^{pp'} leading part") {
    // f_{pp'} = (1/2)(v+w)^{pp'} + (1/2) f_p(v,w)^{p'} - (1/2) f_p(w,v)^{p'}
    for (auto [p, p2] : {std::pair<long, long>{3, 5}, {5, 3}, {3, 7}}) {
        auto fp = fp_poly(p, PolySign::Upper);
        auto lead = (BiPoly::var_v() + BiPoly::var_w()).pow(static_cast<unsigned long>(p * p2)).scaled(mpq_class(1, 2));
        auto rest = fp.pow(static_cast<unsigned long>(p2)).scaled(mpq_class(1, 2)) -
                    fp.swapped().pow(static_cast<unsigned long>(p2)).scaled(mpq_class(1, 2));
        CHECK(compose_fp({p, p2}, PolySign::Upper) == lead + rest);
    }
}

TEST_CASE("r=1 diagonal corner value") {
    // F_3(B)_11 = f_3(B_11, B_11) = 4 B_11^3
    auto f = fp_poly(3, PolySign::Upper).substituted(BiPoly::var_v(), BiPoly::var_v());
    CHECK(f.terms().size() == 1);
    CHECK(f.coeff(3, 0) == 4);
}

TEST_CASE("composition matches an independent scalar evaluation") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(-5, 5);
    for (auto sign : {PolySign::Upper, PolySign::Lower}) {
        auto f35 = compose_fp({3, 5}, sign);
        auto f357 = compose_fp({3, 5, 7}, sign);
        for (int it = 0; it < 6; ++it) {
            mpq_class v0(d(rng), 1 + std::abs(d(rng))), w0(d(rng), 1 + std::abs(d(rng)));
            v0.canonicalize();
            w0.canonicalize();
            CHECK(f35.eval(v0, w0) == compose_fp_eval({3, 5}, sign, v0, w0));
            CHECK(f357.eval(v0, w0) == compose_fp_eval({3, 5, 7}, sign, v0, w0));
        }
    }
}

TEST_CASE("pair congruence certificates") {
    auto g35 = g_poly({3, 5}, PolySign::Upper);
    auto c = congruence_extract(g35);
    CHECK(c[0] == 0);
    CHECK(c[1] == 0);
    CHECK(c[2] == mpq_class(15, 8));

    CHECK(g_poly({5, 5}, PolySign::Upper).is_zero());

    auto g57l = g_poly({5, 7}, PolySign::Lower);
    CHECK(congruence_extract(g57l)[2] == -mpq_class(35, 16) * 2);
}

TEST_CASE("triple congruence certificate for (3,5,7)") {
    auto g = g_poly({3, 5, 7}, PolySign::Upper);
    auto c = congruence_extract(g);
    CHECK(c[0] == 0);
    CHECK(c[1] == 0);
    CHECK(2 * c[2] == mpq_class(-525, 16));

    // the lower-sign analogue has no closed-form target; it must still compute
    auto gl = g_poly({3, 5, 7}, PolySign::Lower);
    CHECK(!gl.is_zero());
    CHECK(gl.total_degree() == 105);
}

TEST_CASE("triple congruence with a larger prime: (3,5,11)") {
    auto g = g_poly({3, 5, 11}, PolySign::Upper);
    auto c = congruence_extract(g);
    CHECK(c[0] == 0);
    CHECK(c[1] == 0);
    CHECK(c[2] == mpq_class(-(3 * 5 * 11), 32) * (11 - 2) * (5 - 3) / 2);
}

TEST_CASE("corner matrix law equals the entrywise f_p, via the engine matrix route") {
    // build F_p(B) = (1/2)(+-(+-B+B^t)^{(p)} + B^{(p)} -+ B^{(p)t}) on a generic 2x2 B
    const int r = 2, arity = r * r, p = 3;
    const int order = p;
    auto b = M(r, arity, order, kQ);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) b.at(i, j) = S::variable(arity, order, i * r + j, kQ);
    for (auto sign : {PolySign::Upper, PolySign::Lower}) {
        int sgn = sign == PolySign::Upper ? 1 : -1;
        auto half = mpq_class(1, 2);
        auto inner = (sgn == 1 ? b + b.transpose() : (-b) + b.transpose());
        auto fp_mat = (inner.entrywise_power(p).scaled(mpq_class(sgn)) + b.entrywise_power(p) -
                       b.transpose().entrywise_power(p).scaled(mpq_class(sgn)))
                          .scaled(half);
        auto fp = fp_poly(p, sign);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                auto want = fp.as_series(arity, order, i * r + j, j * r + i, kQ);
                CHECK(fp_mat.at(i, j) == want);
            }
    }
}

TEST_CASE("corner consistency against the full lift, n=2") {
    for (auto kind : {SplitKind::SymEven, SplitKind::Symplectic}) {
        auto q = split_form(kind, 2);
        CHECK(corner_consistency(q, 3, 4).ok);
    }
}

TEST_CASE("corner three-commutator identity") {
    CHECK(corner_three_commutator(3, 5, 3, PolySign::Upper) == g_poly({3, 5, 3}, PolySign::Upper));
    CHECK(corner_three_commutator(3, 3, 5, PolySign::Upper).is_zero() ==
          g_poly({5, 3, 3}, PolySign::Upper).is_zero());
}

TEST_CASE("SO unipotent and torus reductions") {
    CHECK(so_unipotent_check(3, 6).ok);
    CHECK(so_torus_check(3, 5, 6).ok);
    auto comp = so_unipotent_composition(3, 5);
    CHECK(comp.matches_composed);
    CHECK(comp.commutator_matches_g);
    CHECK(comp.commutator_nonzero);
}

TEST_CASE("lambda closed form") {
    auto lam = lambda_closed_form(3, 4);
    CHECK(lam.constant_term() == CycScalar(1));
    CHECK(lam.truncated(1) == S::constant(4, 1, CycScalar(1)));  // lambda = 1 mod (T)^2

    auto l3 = lambda_closed_lift(3, 5);
    auto l5 = lambda_closed_lift(5, 5);
    CHECK(commutator_on_generators(l3, l5).is_zero());
}
