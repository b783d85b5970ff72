#include <doctest.h>

#include "frobcurv/reduced.hpp"

using namespace frobcurv;
using S = Series<CycScalar>;
using M = SeriesMatrix<CycScalar>;

namespace {
const CycScalar kQ = CycScalar(mpq_class(0));
}

TEST_CASE("split forms") {
    auto sp = split_form(SplitKind::Symplectic, 2);
    CHECK(sp.at(0, 1) == CycScalar(1));
    CHECK(sp.at(1, 0) == CycScalar(-1));
    CHECK(sp.at(0, 0).is_zero());
    CHECK(sp.sign == -1);

    auto se = split_form(SplitKind::SymEven, 2);
    CHECK(se.at(0, 1) == CycScalar(1));
    CHECK(se.at(1, 0) == CycScalar(1));
    CHECK(se.sign == 1);

    auto so = split_form(SplitKind::SymOdd, 3);
    CHECK(so.at(0, 0) == CycScalar(1));
    CHECK(so.at(1, 2) == CycScalar(1));
    CHECK(so.at(2, 1) == CycScalar(1));
    CHECK(so.at(1, 1).is_zero());

    CHECK_THROWS_AS(split_form(SplitKind::Symplectic, 3), std::invalid_argument);
    CHECK_THROWS_AS(split_form(SplitKind::SymOdd, 4), std::invalid_argument);
}

TEST_CASE("trivial lift") {
    auto l = trivial_lift(3, 1, 2);
    auto t = S::variable(1, 2, 0, kQ);
    CHECK(l.image(0, 0) == t.scaled(mpq_class(3)) + (t * t).scaled(mpq_class(3)));

    auto l2 = trivial_lift(5, 2, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(l2.image(i, j).constant_term().is_zero());
    CHECK(l2.image(0, 1).is_zero());  // T_12^5 vanishes at order 3
}

TEST_CASE("chern lift fixes the identity and has diagonal linear part") {
    for (int n : {1, 2, 3}) {
        for (const auto kind : {SplitKind::Symplectic, SplitKind::SymEven, SplitKind::SymOdd}) {
            if ((kind == SplitKind::SymOdd) != (n % 2 == 1)) continue;
            auto q = split_form(kind, n);
            for (long p : {3L, 5L}) {
                auto lift = chern_lift(q, p, 3);
                CHECK(lift.exact);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) CHECK(lift.image(i, j).constant_term().is_zero());
                CHECK(check_linear_part_diagonal(lift).ok);
            }
        }
    }
}

TEST_CASE("chern lift equals the lambda closed form for n=2 symplectic") {
    auto q = split_form(SplitKind::Symplectic, 2);
    auto lift = chern_lift(q, 3, 3);
    auto closed = lambda_closed_lift(3, 3);
    CHECK(lift.phi0 == closed.phi0);
}

TEST_CASE("H_q diagram commutes for split forms") {
    auto q2 = split_form(SplitKind::Symplectic, 2);
    CHECK(verify_hq_diagram(q2, chern_lift(q2, 3, 4)).ok);

    auto q2e = split_form(SplitKind::SymEven, 2);
    CHECK(verify_hq_diagram(q2e, chern_lift(q2e, 5, 3)).ok);

    // the trivial lift is not the Chern lift: mixed degree-2 terms break H_q
    auto bad = verify_hq_diagram(q2e, trivial_lift(3, 2, 3));
    CHECK(!bad.ok);
    CHECK(!bad.witness.empty());
}

TEST_CASE("B_q symmetry holds for split forms and breaks under perturbation") {
    auto q = split_form(SplitKind::Symplectic, 2);
    auto lift = chern_lift(q, 3, 3);
    CHECK(verify_bq_diagram(q, lift).ok);

    auto qe = split_form(SplitKind::SymEven, 2);
    CHECK(verify_bq_diagram(qe, chern_lift(qe, 3, 3)).ok);

    auto perturbed = lift;
    perturbed.phi0.at(0, 1) += S::variable(4, 3, 1, kQ) * S::variable(4, 3, 2, kQ);
    CHECK(!verify_bq_diagram(q, perturbed).ok);
}

TEST_CASE("globality holds for split q, fails for a non-root-of-unity form") {
    auto q = split_form(SplitKind::SymEven, 2);
    CHECK(globality_check(chern_lift(q, 3, 3)).ok);
    CHECK(globality_check(trivial_lift(3, 2, 3)).ok);

    std::vector<CycScalar> e{CycScalar(mpq_class(0)), CycScalar(mpq_class(2)), CycScalar(mpq_class(-2)),
                             CycScalar(mpq_class(0))};
    FormMatrix q2(2, -1, std::move(e), RingConfig::rationals());
    auto lift = chern_lift(q2, 3, 3);
    CHECK(!lift.exact);
    auto glob = globality_check(lift);
    CHECK(!glob.ok);
    CHECK(glob.witness.find("constant term") != std::string::npos);
}

TEST_CASE("lift at higher order truncates to the lift at lower order") {
    auto q = split_form(SplitKind::SymEven, 2);
    auto hi = chern_lift(q, 3, 5);
    auto lo = chern_lift(q, 3, 3);
    CHECK(hi.phi0.truncated(3) == lo.phi0);
}

TEST_CASE("centralizer property for q = 1, n = 2") {
    auto q = identity_form(2);
    auto lift = chern_lift(q, 3, 4);
    auto proto = lift.phi0.proto();
    auto alpha = S::variable(4, 4, 0, proto);
    auto beta = S::variable(4, 4, 1, proto);
    std::vector<S> images{alpha, beta, -beta, alpha};
    auto m11 = lift.image(0, 0).substitute(images);
    auto m12 = lift.image(0, 1).substitute(images);
    auto m21 = lift.image(1, 0).substitute(images);
    auto m22 = lift.image(1, 1).substitute(images);
    CHECK(m11 == m22);
    CHECK((m12 + m21).is_zero());
}

TEST_CASE("phi_p respects the ideal of x^t q x - q") {
    // phi_p(x^t q x - q) = (x^t q x)^{(p)} - q^{(p)} entrywise, via apply_lift
    auto q = split_form(SplitKind::SymEven, 2);
    const long p = 3;
    const int order = 3;
    auto lift = chern_lift(q, p, order);
    auto proto = lift.phi0.proto();
    auto x = M::one_plus_generators(2, order, proto);
    auto qm = form_as_matrix(q, 4, order);
    auto h = x.transpose() * qm * x;
    auto hp = h.entrywise_power(static_cast<unsigned long>(p));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto lhs = apply_lift(h.at(i, j) - qm.at(i, j), lift);
            auto rhs = hp.at(i, j) - S::constant(4, order, cyc_frobenius(q.at(i, j), p));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("a cyclotomic root-of-unity form goes through the whole engine") {
    // q = [[0, z], [z, 0]] over Z[1/2, zeta_4]: symmetric, entries roots of unity
    auto cfg = RingConfig::make(4);
    auto z = CycScalar::root_power(cfg, 1);
    std::vector<CycScalar> e{CycScalar::zero(cfg), z, z, CycScalar::zero(cfg)};
    FormMatrix q(2, +1, std::move(e), cfg);
    CHECK(q.entries_roots_of_unity_or_zero());

    auto lift = chern_lift(q, 3, 3);
    CHECK(lift.exact);
    CHECK(verify_hq_diagram(q, lift).ok);
    CHECK(verify_bq_diagram(q, lift).ok);
    CHECK(globality_check(lift).ok);

    auto rep = curvature2(q, 3, 5, 3);
    CHECK(rep.divisibility == "ok");
    auto rep_flip = curvature2(q, 5, 3, 3);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(rep.entries.at(i, j) == -rep_flip.entries.at(i, j));
}

TEST_CASE("form matrix validation") {
    std::vector<CycScalar> bad{CycScalar(0), CycScalar(1), CycScalar(1), CycScalar(0)};
    CHECK_THROWS_AS(FormMatrix(2, -1, bad, RingConfig::rationals()), std::invalid_argument);
    std::vector<CycScalar> sing{CycScalar(0), CycScalar(0), CycScalar(0), CycScalar(0)};
    CHECK_THROWS_AS(FormMatrix(2, 1, sing, RingConfig::rationals()), std::invalid_argument);
    CHECK(split_form(SplitKind::SymEven, 4).entries_roots_of_unity_or_zero());
}
