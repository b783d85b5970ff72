// Acceptance suite: one line per criterion, exact checks only.
// Budgets are printed alongside the elapsed time; failures exit nonzero.

#include <chrono>
#include <iostream>
#include <random>

#include "frobcurv/verify.hpp"

using namespace frobcurv;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& label, double budget_s, const std::function<bool(std::string&)>& fn) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs (budget %.0fs)", secs, budget_s);
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << label << " [" << buf << "]\n";
    if (!detail.empty()) std::cout << "      " << detail << "\n";
    if (!ok) ++g_failures;
}

bool targets_pass(const std::vector<std::string>& ids, std::string& detail) {
    VerifyParams params;
    auto res = run_verify(ids, params, 1);
    for (const auto& r : res)
        if (!r.pass) {
            for (const auto& l : r.lines)
                if (l.find("FAIL") != std::string::npos) detail += r.id + " " + l + " ";
            return false;
        }
    return true;
}

const CycScalar kQ = CycScalar(mpq_class(0));

Series<CycScalar> rnd_series(int arity, int order, std::mt19937& rng, bool zero_const) {
    std::uniform_int_distribution<int> coeff(-3, 3), expo(zero_const ? 1 : 0, order);
    auto probe = Series<CycScalar>::zero(arity, order, kQ);
    std::vector<Series<CycScalar>::Term> terms;
    for (int t = 0; t < 6; ++t) {
        std::vector<int> e(static_cast<size_t>(arity), 0);
        int budget = expo(rng);
        if (zero_const && budget == 0) continue;
        std::uniform_int_distribution<int> pick(0, arity - 1);
        for (int d = 0; d < budget; ++d) e[static_cast<size_t>(pick(rng))]++;
        terms.push_back({probe.pack(e), CycScalar(mpq_class(coeff(rng)))});
    }
    return Series<CycScalar>::from_terms(arity, order, kQ, std::move(terms));
}

// criterion 11: the randomized structural property suites
bool property_suites(std::string& detail) {
    std::mt19937 rng(20260808);
    int cases = 0;

    // homomorphism laws for apply_lift
    auto q2 = split_form(SplitKind::SymEven, 2);
    auto lift3 = chern_lift(q2, 3, 3), lift5 = chern_lift(q2, 5, 3);
    for (int it = 0; it < 60; ++it) {
        auto f = rnd_series(4, 3, rng, false), g = rnd_series(4, 3, rng, false);
        for (const auto* L : {&lift3, &lift5}) {
            if (!(apply_lift(f * g, *L) == apply_lift(f, *L) * apply_lift(g, *L))) {
                detail = "apply_lift multiplicativity failed";
                return false;
            }
            if (!(apply_lift(f + g, *L) == apply_lift(f, *L) + apply_lift(g, *L))) {
                detail = "apply_lift additivity failed";
                return false;
            }
            cases += 2;
        }
    }

    // square-of-square-root identities, series matrices
    for (int it = 0; it < 60; ++it) {
        SeriesMatrix<CycScalar> u(2, 4, 3, kQ);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) u.at(i, j) = rnd_series(4, 3, rng, true);
        auto root = binomial_power(u, mpq_class(1, 2));
        if (!(root * root == u + SeriesMatrix<CycScalar>::identity(2, 4, 3, kQ))) {
            detail = "matrix sqrt identity failed";
            return false;
        }
        if (!(root * binomial_power(u, mpq_class(-1, 2)) == SeriesMatrix<CycScalar>::identity(2, 4, 3, kQ))) {
            detail = "sqrt * inverse-sqrt failed";
            return false;
        }
        cases += 2;
    }

    // p-adic square roots square back
    for (long p : {3L, 5L}) {
        std::uniform_int_distribution<long> d(0, 1000000);
        for (int it = 0; it < 100; ++it) {
            auto a = PadicScalar::from_long(p, 7, 1 + p * d(rng));
            auto r = a.sqrt_branch();
            if (!(r * r - a).is_zero()) {
                detail = "p-adic sqrt failed";
                return false;
            }
            ++cases;
        }
    }

    // truncation stability of lifts and curvature pipelines (nu vs nu+2)
    for (auto kind : {SplitKind::Symplectic, SplitKind::SymEven}) {
        auto q = split_form(kind, 2);
        for (long p : {3L, 5L}) {
            auto hi = chern_lift(q, p, 4), lo = chern_lift(q, p, 2);
            if (!(hi.phi0.truncated(2) == lo.phi0)) {
                detail = "lift truncation stability failed";
                return false;
            }
            ++cases;
        }
        auto hi2 = curvature2(q, 3, 5, 4), lo2 = curvature2(q, 3, 5, 2);
        if (!(hi2.entries.truncated(2) == lo2.entries)) {
            detail = "curvature2 truncation stability failed";
            return false;
        }
        auto hi11 = curvature11(q, 3, 5, 4), lo11 = curvature11(q, 3, 5, 2);
        if (!(hi11.entries.truncated(2) == lo11.entries)) {
            detail = "curvature11 truncation stability failed";
            return false;
        }
        cases += 2;
    }
    {
        auto q3 = split_form(SplitKind::SymOdd, 3);
        auto hi = chern_lift(q3, 3, 4), lo = chern_lift(q3, 3, 2);
        if (!(hi.phi0.truncated(2) == lo.phi0)) {
            detail = "n=3 lift truncation stability failed";
            return false;
        }
        ++cases;
    }

    // divisibility certificates never fail on split inputs
    for (int n : {1, 2, 3, 4}) {
        std::vector<FormMatrix> forms;
        if (n % 2 == 0) {
            forms.push_back(split_form(SplitKind::Symplectic, n));
            forms.push_back(split_form(SplitKind::SymEven, n));
        } else {
            forms.push_back(split_form(SplitKind::SymOdd, n));
        }
        for (const auto& q : forms)
            for (auto [p, p2] : {std::pair<long, long>{3, 5}, {3, 7}, {5, 7}}) {
                curvature2(q, p, p2, 2);       // throws divisibility_error on violation
                curvature11(q, p, p2, 2);
                cases += 2;
            }
    }
    curvature3(split_form(SplitKind::SymEven, 2), 3, 5, 7, 2);
    ++cases;

    // sigma_p homomorphism laws on random cyclotomic scalars
    auto cfg = RingConfig::make(4);
    std::uniform_int_distribution<int> sc(-5, 5);
    for (int it = 0; it < 60; ++it) {
        std::vector<mpq_class> ca{mpq_class(sc(rng)), mpq_class(sc(rng))}, cb{mpq_class(sc(rng)), mpq_class(sc(rng))};
        CycScalar a(cfg, ca), b(cfg, cb);
        if (!(cyc_frobenius(a * b, 7) == cyc_frobenius(a, 7) * cyc_frobenius(b, 7))) {
            detail = "sigma_p multiplicativity failed";
            return false;
        }
        ++cases;
    }

    detail = std::to_string(cases) + " randomized/structural cases";
    return cases >= 500;
}

}  // namespace

int main() {
    criterion(1, "remarkable-polynomial congruences (pairs and triples)", 10,
              [](std::string& d) { return targets_pass({"thm-4.8", "lemma-4.2"}, d); });
    criterion(2, "lift construction sanity: diagrams, linear part, globality (n <= 4, p <= 7, nu = 4)", 60,
              [](std::string& d) { return targets_pass({"thm-2.7", "thm-3.1.1"}, d); });
    criterion(3, "curvature graded piece 2 vanishes for even split forms", 60,
              [](std::string& d) { return targets_pass({"thm-3.2.2"}, d); });
    criterion(4, "curvature nonvanishing for n=4 via the corner reduction", 30,
              [](std::string& d) { return targets_pass({"thm-3.2.1"}, d); });
    criterion(5, "n=2 symplectic and n=1 vanishing; lambda closed form and commutation", 60,
              [](std::string& d) { return targets_pass({"thm-3.2.3", "thm-3.2.4"}, d); });
    criterion(6, "special orthogonal curvature: torus vanishing and unipotent nonvanishing", 30,
              [](std::string& d) { return targets_pass({"thm-3.4"}, d); });
    criterion(7, "3-curvature corner identity and nonvanishing certificates", 30,
              [](std::string& d) { return targets_pass({"thm-3.5"}, d); });
    criterion(8, "mixed (1,1)-curvature congruences mod (T)^3", 30,
              [](std::string& d) { return targets_pass({"thm-3.6"}, d); });
    criterion(9, "unitary (1,1)-curvature contradiction and witnesses", 10,
              [](std::string& d) { return targets_pass({"thm-3.7", "thm-3.1.3"}, d); });
    criterion(10, "one-prime (1,1)-curvature: engine vs closed form, n=1 identity, vanishing criterion", 30,
              [](std::string& d) { return targets_pass({"thm-5.1"}, d); });
    criterion(11, "structural property suites (500+ randomized cases)", 120, property_suites);

    if (g_failures) {
        std::cout << g_failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria pass\n";
    return 0;
}
