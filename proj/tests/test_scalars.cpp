#include <doctest.h>

#include <random>

#include "frobcurv/cyclotomic.hpp"

using namespace frobcurv;

namespace {
CycScalar rnd_scalar(const std::shared_ptr<const RingConfig>& cfg, std::mt19937& rng) {
    std::uniform_int_distribution<int> d(-6, 6);
    std::vector<mpq_class> coords(static_cast<size_t>(cfg->phiN));
    for (auto& c : coords) c = d(rng);
    return CycScalar(cfg, std::move(coords));
}
}  // namespace

TEST_CASE("cyclotomic polynomials match known values for N <= 12") {
    auto coeffs = [](long n) { return detail::cyclotomic_poly(n); };
    CHECK(coeffs(1) == std::vector<mpz_class>{-1, 1});
    CHECK(coeffs(2) == std::vector<mpz_class>{1, 1});
    CHECK(coeffs(3) == std::vector<mpz_class>{1, 1, 1});
    CHECK(coeffs(4) == std::vector<mpz_class>{1, 0, 1});
    CHECK(coeffs(5) == std::vector<mpz_class>{1, 1, 1, 1, 1});
    CHECK(coeffs(6) == std::vector<mpz_class>{1, -1, 1});
    CHECK(coeffs(7) == std::vector<mpz_class>{1, 1, 1, 1, 1, 1, 1});
    CHECK(coeffs(8) == std::vector<mpz_class>{1, 0, 0, 0, 1});
    CHECK(coeffs(9) == std::vector<mpz_class>{1, 0, 0, 1, 0, 0, 1});
    CHECK(coeffs(10) == std::vector<mpz_class>{1, -1, 1, -1, 1});
    CHECK(coeffs(11) == std::vector<mpz_class>{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
    CHECK(coeffs(12) == std::vector<mpz_class>{1, 0, -1, 0, 1});
}

TEST_CASE("cyc_mul reduces modulo the cyclotomic polynomial") {
    auto c4 = RingConfig::make(4);
    auto z4 = CycScalar::root_power(c4, 1);
    CHECK(z4 * z4 == CycScalar::from_rational(c4, -1));

    auto one = CycScalar::from_rational(c4, 1);
    CHECK((one + z4) * (one - z4) == CycScalar::from_rational(c4, 2));

    auto c3 = RingConfig::make(3);
    auto z3 = CycScalar::root_power(c3, 1);
    CHECK(z3 * CycScalar::root_power(c3, 2) == CycScalar::from_rational(c3, 1));
}

TEST_CASE("cyc_frobenius sends z to z^p") {
    auto c3 = RingConfig::make(3);
    CHECK(cyc_frobenius(CycScalar::root_power(c3, 1), 5) == CycScalar::root_power(c3, 2));

    CycScalar r(mpq_class(7, 4));
    CHECK(cyc_frobenius(r, 3) == r);

    auto c4 = RingConfig::make(4);
    CHECK(cyc_frobenius(CycScalar::root_power(c4, 1), 3) == -CycScalar::root_power(c4, 1));

    CHECK_THROWS_AS(cyc_frobenius(CycScalar::root_power(c4, 1), 2), std::invalid_argument);
}

TEST_CASE("fermat quotient: phi_p(a) = a^p + p delta_p(a) exactly") {
    CHECK(fermat_quotient(CycScalar(2), 3) == CycScalar(-2));
    CHECK(fermat_quotient(CycScalar(2), 5) == CycScalar(-6));
    auto c5 = RingConfig::make(5);
    CHECK(fermat_quotient(CycScalar::root_power(c5, 1), 3).is_zero());
}

TEST_CASE("val_p on rational scalars") {
    CHECK(CycScalar(mpq_class(2, 9)).val_p(3) == -2);
    CHECK(CycScalar(mpq_class(15, 2)).val_p(5) == 1);
    CHECK(!CycScalar(mpq_class(0)).val_p(7).has_value());
}

TEST_CASE("sigma_p is a commuting family of ring homomorphisms") {
    std::mt19937 rng(12345);
    for (long N : {3L, 4L, 5L, 12L}) {
        auto cfg = RingConfig::make(N);
        for (int it = 0; it < 20; ++it) {
            auto a = rnd_scalar(cfg, rng), b = rnd_scalar(cfg, rng);
            long p = 7, p2 = 11;
            if (N == 7) p = 5;
            CHECK(cyc_frobenius(a * b, p) == cyc_frobenius(a, p) * cyc_frobenius(b, p));
            CHECK(cyc_frobenius(a + b, p) == cyc_frobenius(a, p) + cyc_frobenius(b, p));
            CHECK(cyc_frobenius(cyc_frobenius(a, p), p2) == cyc_frobenius(cyc_frobenius(a, p2), p));
        }
    }
}

TEST_CASE("phi_p(a) = a^p + p delta_p(a) is multiplicative") {
    std::mt19937 rng(99);
    auto cfg = RingConfig::make(4);
    auto phi = [](const CycScalar& a, long p) {
        return a.pow(static_cast<unsigned long>(p)) +
               fermat_quotient(a, p) * CycScalar(mpq_class(p));
    };
    for (int it = 0; it < 25; ++it) {
        auto a = rnd_scalar(cfg, rng), b = rnd_scalar(cfg, rng);
        CHECK(phi(a * b, 3) == phi(a, 3) * phi(b, 3));
        CHECK(phi(a + b, 3) == phi(a, 3) + phi(b, 3));
    }
}

TEST_CASE("delta_p is integral on Z[zeta]") {
    std::mt19937 rng(7);
    auto cfg = RingConfig::make(5);
    for (int it = 0; it < 25; ++it) {
        auto a = rnd_scalar(cfg, rng);
        auto d = fermat_quotient(a, 3);
        auto v = d.val_p(3);
        CHECK((!v || *v >= 0));
    }
}

TEST_CASE("field inverse via extended euclid") {
    std::mt19937 rng(5);
    for (long N : {1L, 4L, 5L}) {
        auto cfg = RingConfig::make(N);
        for (int it = 0; it < 15; ++it) {
            auto a = rnd_scalar(cfg, rng);
            if (a.is_zero()) continue;
            CHECK(a * a.inverse() == CycScalar::from_rational(cfg, 1));
        }
    }
    CHECK_THROWS_AS(CycScalar(mpq_class(0)).inverse(), std::invalid_argument);
}

TEST_CASE("roots of unity are recognized") {
    auto c4 = RingConfig::make(4);
    CHECK(CycScalar::root_power(c4, 1).is_root_of_unity_or_zero());
    CHECK((-CycScalar::root_power(c4, 1)).is_root_of_unity_or_zero());
    CHECK(CycScalar::zero(c4).is_root_of_unity_or_zero());
    CHECK(CycScalar(mpq_class(-1)).is_root_of_unity_or_zero());
    CHECK(!CycScalar(mpq_class(2)).is_root_of_unity_or_zero());
    CHECK(!(CycScalar::root_power(c4, 1) + CycScalar::from_rational(c4, 1)).is_root_of_unity_or_zero());
}

TEST_CASE("rendering and parsing of scalars") {
    auto c4 = RingConfig::make(4);
    auto a = CycScalar::from_rational(c4, mpq_class(3, 4)) + CycScalar::root_power(c4, 1) * CycScalar(mpq_class(-2));
    CHECK(a.str() == "3/4 - 2*z");
    CHECK(CycScalar::parse(c4, a.str()) == a);
    CHECK(CycScalar::parse(c4, "1 + z^2") == CycScalar::zero(c4));  // z^2 = -1 for N=4
    CHECK(CycScalar::parse(RingConfig::rationals(), "-7/2") == CycScalar(mpq_class(-7, 2)));
    CHECK(CycScalar::parse(c4, "z^3") == -CycScalar::root_power(c4, 1));
    CHECK_THROWS_AS(CycScalar::parse(c4, "nope"), std::invalid_argument);
}

TEST_CASE("membership in A = Z[1/M, zeta]") {
    CHECK(CycScalar(mpq_class(3, 8)).in_base_ring());   // M = 2
    CHECK(!CycScalar(mpq_class(1, 3)).in_base_ring());
    auto c6m6 = RingConfig::make(6, 6);
    CHECK(CycScalar::from_rational(c6m6, mpq_class(5, 12)).in_base_ring());
}
