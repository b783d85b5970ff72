#include <doctest.h>

#include "frobcurv/unitary.hpp"

using namespace frobcurv;

TEST_CASE("quotient-ring multiplication uses beta^2 = -2 alpha - alpha^2") {
    const int ord = 4;
    auto beta = UCElem::beta(ord);
    auto bb = beta * beta;
    CHECK(bb.g1.is_zero());
    CHECK(bb.g0[1] == -2);
    CHECK(bb.g0[2] == -1);

    // (1+alpha)^2 + beta^2 = 1 in the quotient
    auto one = UCElem::constant(ord, 1);
    auto a = UCElem::alpha(ord);
    auto lhs = (one + a) * (one + a) + beta * beta;
    CHECK(lhs == one);

    auto g = UCElem(UniSeries::constant(ord, 3), UniSeries(ord));
    auto h = UCElem(UniSeries::constant(ord, mpq_class(1, 2)), UniSeries(ord));
    auto gh = g * h;
    CHECK(gh.g0[0] == mpq_class(3, 2));
    CHECK(gh.g1.is_zero());
}

TEST_CASE("uc_lift_p fixes the identity and K_p = 1 mod the augmentation ideal") {
    for (long p : {3L, 5L}) {
        auto phi = uc_lift_p(p, 6);
        CHECK(phi.alpha_img.g0[0] == 0);
        CHECK(phi.alpha_img.g1.is_zero());  // no beta component at all
        CHECK(phi.beta_img.g0.is_zero());
        // beta_p = beta^p K_p: the g1 part starts at alpha^{(p-1)/2}
        CHECK(phi.beta_img.g1.leading_order() == static_cast<int>((p - 1) / 2));
    }
}

TEST_CASE("uc_lift_p at p=3, frozen low-order values") {
    // hand expansion: K_3 = 1 - 3a + 6a^2 - 6a^3, alpha_3 = 4a^3 + O(a^4)
    auto phi = uc_lift_p(3, 3);
    CHECK(phi.alpha_img.g0[1] == 0);
    CHECK(phi.alpha_img.g0[2] == 0);
    CHECK(phi.alpha_img.g0[3] == 4);
    // beta_3 = beta(-2a - a^2)K_3: g1 = -2a + 5a^2 - 9a^3
    CHECK(phi.beta_img.g1[1] == -2);
    CHECK(phi.beta_img.g1[2] == 5);
    CHECK(phi.beta_img.g1[3] == -9);
}

TEST_CASE("uc_lift_pbar") {
    auto phi = uc_lift_pbar(3, 2);
    CHECK(phi.alpha_img.g0[1] == 3);
    CHECK(phi.alpha_img.g0[2] == 3);
    CHECK(phi.alpha_img.g1.is_zero());
    // beta^3 = beta (-2a - a^2)
    CHECK(phi.beta_img.g1[1] == -2);
    CHECK(phi.beta_img.g1[2] == -1);
    // fixes the identity
    CHECK(phi.alpha_img.g0[0] == 0);
}

TEST_CASE("the Chern-side lift preserves the relation") {
    for (long p : {3L, 5L}) CHECK(uc_relation_preserved(uc_lift_p(p, 8), 8));
    // the trivial lift maps f outside (f); composition in canonical form is
    // still the computation the contradiction argument runs on
    CHECK(!uc_relation_preserved(uc_lift_pbar(3, 8), 8));
}

TEST_CASE("the lifts do not commute: explicit witness at order 3") {
    auto res = uc_commutator_check(3, 5, 3);
    CHECK(res.nonzero);
    // phi_p phi_pbar'(alpha) - phi_pbar' phi_p(alpha) = 20 a^3 - 500 a^3
    CHECK(res.diff_alpha.g0[3] == -480);
    CHECK(res.witness.find("a^3") != std::string::npos);

    auto res33 = uc_commutator_check(3, 3, 4);
    CHECK(res33.nonzero);
}

TEST_CASE("coefficient contradiction") {
    auto c35 = coefficient_contradiction(3, 5);
    CHECK(c35.lhs_alpha == 30);
    CHECK(c35.rhs_alpha == 60);
    CHECK(!c35.polynomials_equal);

    auto c33 = coefficient_contradiction(3, 3);
    CHECK(c33.lhs_alpha == 18);
    CHECK(c33.rhs_alpha == 36);

    auto c55 = coefficient_contradiction(5, 5);
    CHECK(c55.lhs_alpha == 50);
    CHECK(c55.rhs_alpha == 100);
}

TEST_CASE("embedding consistency with the full GL_2 engine") {
    CHECK(uc_embedding_consistency(3, 8).ok);
    CHECK(uc_embedding_consistency(5, 8).ok);
}
