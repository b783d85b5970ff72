#pragma once

#include "frobcurv/curvature.hpp"

namespace frobcurv {

/// Dense truncated univariate series over Q: coeffs[i] is the alpha^i coefficient.
class UniSeries {
public:
    explicit UniSeries(int order) : coeffs_(static_cast<size_t>(order) + 1) {}
    static UniSeries constant(int order, const mpq_class& c) {
        UniSeries s(order);
        s.coeffs_[0] = c;
        return s;
    }
    static UniSeries variable(int order) {
        UniSeries s(order);
        if (order >= 1) s.coeffs_[1] = 1;
        return s;
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const mpq_class& operator[](int i) const { return coeffs_[static_cast<size_t>(i)]; }
    mpq_class& operator[](int i) { return coeffs_[static_cast<size_t>(i)]; }
    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(), [](const mpq_class& c) { return c == 0; });
    }
    std::optional<int> leading_order() const {
        for (int i = 0; i <= order(); ++i)
            if (coeffs_[static_cast<size_t>(i)] != 0) return i;
        return std::nullopt;
    }

    friend UniSeries operator+(const UniSeries& a, const UniSeries& b) {
        a.check(b);
        UniSeries out = a;
        for (int i = 0; i <= a.order(); ++i) out[i] += b[i];
        return out;
    }
    friend UniSeries operator-(const UniSeries& a, const UniSeries& b) {
        a.check(b);
        UniSeries out = a;
        for (int i = 0; i <= a.order(); ++i) out[i] -= b[i];
        return out;
    }
    UniSeries operator-() const {
        UniSeries out = *this;
        for (auto& c : out.coeffs_) c = -c;
        return out;
    }
    friend UniSeries operator*(const UniSeries& a, const UniSeries& b) {
        a.check(b);
        UniSeries out(a.order());
        for (int i = 0; i <= a.order(); ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; i + j <= a.order(); ++j)
                if (b[j] != 0) out[i + j] += a[i] * b[j];
        }
        return out;
    }
    UniSeries& operator+=(const UniSeries& b) { return *this = *this + b; }
    UniSeries& operator-=(const UniSeries& b) { return *this = *this - b; }
    friend bool operator==(const UniSeries& a, const UniSeries& b) { return a.coeffs_ == b.coeffs_; }

    UniSeries scaled(const mpq_class& c) const {
        UniSeries out = *this;
        for (auto& x : out.coeffs_) x *= c;
        return out;
    }
    UniSeries pow(unsigned long e) const {
        UniSeries r = constant(order(), 1), base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }
    /// (1+u)^s for u = *this with zero constant term, s in {1/2,-1/2}.
    UniSeries binomial_power(const mpq_class& s) const {
        if (coeffs_[0] != 0) throw std::invalid_argument("UniSeries: binomial power needs zero constant term");
        UniSeries acc = constant(order(), 1), pw = constant(order(), 1);
        for (int i = 1; i <= order(); ++i) {
            pw = pw * (*this);
            if (pw.is_zero()) break;
            acc += pw.scaled(detail::binom_coeff(s, i));
        }
        return acc;
    }
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i <= order(); ++i) {
            if (coeffs_[static_cast<size_t>(i)] == 0) continue;
            if (!first) os << " + ";
            os << "(" << mpq_str(coeffs_[static_cast<size_t>(i)]) << ")";
            if (i >= 1) os << "*a" << (i > 1 ? "^" + std::to_string(i) : "");
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check(const UniSeries& b) const {
        if (order() != b.order()) throw std::invalid_argument("UniSeries: order mismatch");
    }
    std::vector<mpq_class> coeffs_;
};

/**
 * An element of Z[1/2][[alpha,beta]]/(f), f = 2*alpha + alpha^2 + beta^2,
 * in the canonical form g0(alpha) + g1(alpha)*beta obtained by rewriting
 * beta^2 = -2*alpha - alpha^2. The relation is monic in beta^2, so the form
 * is unique and the reduction exact.
 */
struct UCElem {
    UniSeries g0, g1;

    explicit UCElem(int order) : g0(order), g1(order) {}
    UCElem(UniSeries a, UniSeries b) : g0(std::move(a)), g1(std::move(b)) {
        if (g0.order() != g1.order()) throw std::invalid_argument("UCElem: component order mismatch");
    }
    static UCElem constant(int order, const mpq_class& c) { return {UniSeries::constant(order, c), UniSeries(order)}; }
    static UCElem alpha(int order) { return {UniSeries::variable(order), UniSeries(order)}; }
    static UCElem beta(int order) { return {UniSeries(order), UniSeries::constant(order, 1)}; }

    int order() const { return g0.order(); }
    bool is_zero() const { return g0.is_zero() && g1.is_zero(); }

    /// -2*alpha - alpha^2, the canonical image of beta^2.
    static UniSeries beta_sq(int order) {
        UniSeries s(order);
        if (order >= 1) s[1] = -2;
        if (order >= 2) s[2] = -1;
        return s;
    }

    friend UCElem operator+(const UCElem& a, const UCElem& b) { return {a.g0 + b.g0, a.g1 + b.g1}; }
    friend UCElem operator-(const UCElem& a, const UCElem& b) { return {a.g0 - b.g0, a.g1 - b.g1}; }
    friend UCElem operator*(const UCElem& a, const UCElem& b) {
        // (g0 + g1 b)(h0 + h1 b) = g0h0 + g1h1 b^2 + (g0h1 + g1h0) b
        UniSeries bsq = beta_sq(a.order());
        return {a.g0 * b.g0 + a.g1 * b.g1 * bsq, a.g0 * b.g1 + a.g1 * b.g0};
    }
    UCElem& operator+=(const UCElem& b) { return *this = *this + b; }
    UCElem& operator*=(const UCElem& b) { return *this = *this * b; }
    friend bool operator==(const UCElem& a, const UCElem& b) { return a.g0 == b.g0 && a.g1 == b.g1; }
    friend bool operator!=(const UCElem& a, const UCElem& b) { return !(a == b); }

    UCElem pow(unsigned long e) const {
        UCElem r = constant(order(), 1), base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    std::string str() const { return "(" + g0.str() + ") + (" + g1.str() + ")*b"; }
};

/// Images of (alpha, beta) under a ring endomorphism of the quotient.
struct UCEndo {
    UCElem alpha_img, beta_img;

    /// Apply to an element in canonical form: e = g0(alpha) + g1(alpha)*beta.
    /// The alpha image must have zero constant term (the lifts fix the identity).
    UCElem apply(const UCElem& e) const {
        if (alpha_img.g0[0] != 0)
            throw std::invalid_argument("UCEndo: alpha image has nonzero constant term");
        int ord = e.order();
        // g(alpha_img) for univariate g: alpha_img must have zero constant term
        auto subst = [&](const UniSeries& g) {
            UCElem acc(ord), pw = UCElem::constant(ord, 1);
            for (int i = 0; i <= ord; ++i) {
                if (g[i] != 0) acc += pw * UCElem::constant(ord, g[i]);
                if (i < ord) pw = pw * alpha_img;
            }
            return acc;
        };
        return subst(e.g0) + subst(e.g1) * beta_img;
    }
};

/**
 * The Chern lift on U^c_1 for q = 1:
 *   alpha_p = (1+alpha)^p K_p - 1,  beta_p = beta^p K_p,
 *   K_p = (((1+alpha)^2 + beta^2)^p / ((1+alpha)^{2p} + beta^{2p}))^{1/2},
 * where in the quotient (1+alpha)^2 + beta^2 = 1, so K_p is the -1/2 power
 * of the denominator.
 */
inline UCEndo uc_lift_p(long p, int order) {
    if (!is_odd_prime(p)) throw std::invalid_argument("uc_lift_p: p must be an odd prime");
    UniSeries one = UniSeries::constant(order, 1);
    UniSeries onea = UniSeries::constant(order, 1) + UniSeries::variable(order);  // 1 + alpha
    UniSeries beta2p = UCElem::beta_sq(order).pow(static_cast<unsigned long>(p));  // beta^{2p} in g0 form
    UniSeries base = onea.pow(static_cast<unsigned long>(2 * p)) + beta2p;
    if (base[0] != 1) throw invalid_lift("uc_lift_p: K_p base not congruent to 1");
    UniSeries kp = (base - one).binomial_power(mpq_class(-1, 2));
    UniSeries alpha_p = onea.pow(static_cast<unsigned long>(p)) * kp - one;
    // beta^p = beta * (beta^2)^{(p-1)/2}
    UniSeries beta_p_g1 = UCElem::beta_sq(order).pow(static_cast<unsigned long>((p - 1) / 2)) * kp;
    return UCEndo{UCElem(alpha_p, UniSeries(order)), UCElem(UniSeries(order), beta_p_g1)};
}

/// The trivial lift: alpha -> (1+alpha)^{p'} - 1, beta -> beta^{p'}.
inline UCEndo uc_lift_pbar(long p2, int order) {
    if (!is_odd_prime(p2)) throw std::invalid_argument("uc_lift_pbar: p' must be an odd prime");
    UniSeries one = UniSeries::constant(order, 1);
    UniSeries onea = one + UniSeries::variable(order);
    UniSeries alpha_img = onea.pow(static_cast<unsigned long>(p2)) - one;
    UniSeries beta_img_g1 = UCElem::beta_sq(order).pow(static_cast<unsigned long>((p2 - 1) / 2));
    return UCEndo{UCElem(alpha_img, UniSeries(order)), UCElem(UniSeries(order), beta_img_g1)};
}

/// phi maps f = 2a + a^2 + b^2 to something reducing to 0 in the quotient.
inline bool uc_relation_preserved(const UCEndo& phi, int order) {
    UCElem a = phi.alpha_img, b = phi.beta_img;
    UCElem two = UCElem::constant(order, 2);
    UCElem f = two * a + a * a + b * b;
    return f.is_zero();
}

struct UCCommutatorResult {
    bool nonzero = false;
    std::string witness;
    UCElem diff_alpha, diff_beta;
};

/// Compose the two endomorphisms both ways on the generators.
inline UCCommutatorResult uc_commutator_check(long p, long p2, int order) {
    auto fp = uc_lift_p(p, order);
    auto fb = uc_lift_pbar(p2, order);
    UCElem a_pq = fp.apply(fb.alpha_img), a_qp = fb.apply(fp.alpha_img);
    UCElem b_pq = fp.apply(fb.beta_img), b_qp = fb.apply(fp.beta_img);
    UCCommutatorResult res{false, "", a_pq - a_qp, b_pq - b_qp};
    auto describe = [](const UCElem& d, const char* gen) -> std::optional<std::string> {
        auto l0 = d.g0.leading_order(), l1 = d.g1.leading_order();
        if (l0) return std::string(gen) + ": coefficient of a^" + std::to_string(*l0) + " differs by " +
                   mpq_str(d.g0[*l0]);
        if (l1) return std::string(gen) + ": coefficient of a^" + std::to_string(*l1) + "*b differs by " +
                   mpq_str(d.g1[*l1]);
        return std::nullopt;
    };
    if (auto w = describe(res.diff_alpha, "alpha")) {
        res.nonzero = true;
        res.witness = *w;
    } else if (auto w2 = describe(res.diff_beta, "beta")) {
        res.nonzero = true;
        res.witness = *w2;
    }
    return res;
}

/**
 * The exact polynomial identity that commutation would force:
 *   (1+a)^{2pp'} - (2a+a^2)^{pp'}
 *     = ((1+a)^{2p} - (2a+a^2)^p)^{p'} * ((1+a)^{2p'} - (2a+a^2)^{p'})^p.
 * Picking out the alpha coefficients gives 2pp' on the left and 4pp' on the
 * right, so the two sides differ and the lifts cannot commute.
 */
struct CoefficientContradiction {
    mpz_class lhs_alpha, rhs_alpha;
    bool polynomials_equal = false;
};

inline CoefficientContradiction coefficient_contradiction(long p, long p2) {
    // dense univariate integer polynomials
    using Poly = std::vector<mpz_class>;
    auto mul = [](const Poly& a, const Poly& b) {
        Poly out(a.size() + b.size() - 1);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        }
        return out;
    };
    auto powp = [&](Poly a, unsigned long e) {
        Poly r{1};
        while (e > 0) {
            if (e & 1) r = mul(r, a);
            e >>= 1;
            if (e) a = mul(a, a);
        }
        return r;
    };
    auto onea_pow = [&](unsigned long e) { return powp(Poly{1, 1}, e); };
    auto core = [&](long pr) {  // (1+a)^{2pr} - (2a+a^2)^{pr}
        Poly lhs = onea_pow(static_cast<unsigned long>(2 * pr));
        Poly sub = powp(Poly{0, 2, 1}, static_cast<unsigned long>(pr));
        if (sub.size() < lhs.size()) sub.resize(lhs.size());
        for (size_t i = 0; i < lhs.size(); ++i) lhs[i] -= sub[i];
        return lhs;
    };
    Poly lhs = core(p * p2);
    Poly rhs = mul(powp(core(p), static_cast<unsigned long>(p2)), powp(core(p2), static_cast<unsigned long>(p)));
    if (rhs.size() < lhs.size()) rhs.resize(lhs.size());
    if (lhs.size() < rhs.size()) lhs.resize(rhs.size());
    return {lhs.size() > 1 ? lhs[1] : 0, rhs.size() > 1 ? rhs[1] : 0, lhs == rhs};
}

/**
 * Embedding consistency: restrict the full GL_2 lift of q = 1 along
 * T -> [[alpha, beta], [-beta, alpha]] and reduce to canonical form; it must
 * reproduce (alpha_p, beta_p). A free-ring truncation at order nu certifies
 * g0 up to alpha-order ceil((nu+1)/2)-1 and g1 up to ceil(nu/2)-1, because
 * the rewrite beta^2 -> -2*alpha - alpha^2 halves degrees at worst.
 */
inline CheckResult uc_embedding_consistency(long p, int order) {
    auto q = identity_form(2);
    auto lift = chern_lift(q, p, order);
    auto proto = lift.phi0.proto();
    const int arity = 4;
    // substitution images in a 2-variable ring mapped into the 4-variable ring:
    // reuse the 4-var ring with var 0 = alpha, var 1 = beta (vars 2,3 unused).
    auto alpha = Series<CycScalar>::variable(arity, order, 0, proto);
    auto beta = Series<CycScalar>::variable(arity, order, 1, proto);
    std::vector<Series<CycScalar>> images{alpha, beta, -beta, alpha};
    auto m11 = lift.image(0, 0).substitute(images);
    auto m12 = lift.image(0, 1).substitute(images);
    auto m21 = lift.image(1, 0).substitute(images);
    auto m22 = lift.image(1, 1).substitute(images);
    if (!(m11 == m22) || !((m12 + m21).is_zero()))
        return {false, "restriction is not of the form [[a,b],[-b,a]]"};

    // canonical form of a series in alpha,beta at free-ring order `order`
    auto to_uc = [&](const Series<CycScalar>& s) {
        UCElem out(order);
        UniSeries bsq = UCElem::beta_sq(order);
        for (const auto& t : s.terms()) {
            int i = t.idx.e[0], j = t.idx.e[1];
            mpq_class c = t.coeff.rational_value();
            UniSeries part = UniSeries::constant(order, c);
            UniSeries apow = UniSeries::variable(order).pow(static_cast<unsigned long>(i));
            part = part * apow * bsq.pow(static_cast<unsigned long>(j / 2));
            if (j % 2 == 0)
                out.g0 += part;
            else
                out.g1 += part;
        }
        return out;
    };
    UCElem got_alpha = to_uc(m11), got_beta = to_uc(m12);
    auto native = uc_lift_p(p, order);
    const int safe_g0 = (order + 2) / 2 - 1;  // ceil((order+1)/2) - 1
    const int safe_g1 = (order + 1) / 2 - 1;
    auto agree = [&](const UniSeries& a, const UniSeries& b, int upto) {
        for (int i = 0; i <= upto; ++i)
            if (!(a[i] == b[i])) return false;
        return true;
    };
    if (!agree(got_alpha.g0, native.alpha_img.g0, safe_g0) || !agree(got_alpha.g1, native.alpha_img.g1, safe_g1))
        return {false, "alpha image disagrees with the quotient-ring lift"};
    if (!agree(got_beta.g0, native.beta_img.g0, safe_g0) || !agree(got_beta.g1, native.beta_img.g1, safe_g1))
        return {false, "beta image disagrees with the quotient-ring lift"};
    return {true, ""};
}

}  // namespace frobcurv
