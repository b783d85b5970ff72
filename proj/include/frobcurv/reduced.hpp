#pragma once

#include "frobcurv/curvature.hpp"

namespace frobcurv {

enum class PolySign { Upper, Lower };  // upper: q^t = q, lower: q^t = -q

/**
 * Exact sparse polynomial in two variables v,w over Q (denominators are
 * powers of 2 for everything built here). No truncation: non-vanishing
 * certificates are exact objects.
 */
class BiPoly {
public:
    using Key = uint64_t;  // (i << 32) | j for the monomial v^i w^j
    struct Term {
        Key key;
        mpq_class coeff;
    };

    static Key key(uint32_t i, uint32_t j) { return (static_cast<Key>(i) << 32) | j; }
    static uint32_t deg_v(Key k) { return static_cast<uint32_t>(k >> 32); }
    static uint32_t deg_w(Key k) { return static_cast<uint32_t>(k & 0xffffffffu); }

    BiPoly() = default;
    static BiPoly constant(const mpq_class& c) {
        BiPoly p;
        if (c != 0) p.terms_.push_back({key(0, 0), c});
        return p;
    }
    static BiPoly var_v() {
        BiPoly p;
        p.terms_.push_back({key(1, 0), 1});
        return p;
    }
    static BiPoly var_w() {
        BiPoly p;
        p.terms_.push_back({key(0, 1), 1});
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const {
        int d = -1;
        for (const auto& t : terms_) d = std::max<int>(d, static_cast<int>(deg_v(t.key) + deg_w(t.key)));
        return d;
    }
    mpq_class coeff(uint32_t i, uint32_t j) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), key(i, j),
                                   [](const Term& t, Key k) { return t.key < k; });
        if (it != terms_.end() && it->key == key(i, j)) return it->coeff;
        return 0;
    }

    friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
        std::vector<Term> acc = a.terms_;
        acc.insert(acc.end(), b.terms_.begin(), b.terms_.end());
        return from_terms(std::move(acc));
    }
    friend BiPoly operator-(const BiPoly& a, const BiPoly& b) { return a + b.scaled(-1); }
    BiPoly scaled(const mpq_class& c) const {
        BiPoly out;
        if (c == 0) return out;
        out.terms_.reserve(terms_.size());
        for (const auto& t : terms_) out.terms_.push_back({t.key, t.coeff * c});
        return out;
    }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
        std::vector<Term> acc;
        acc.reserve(a.terms_.size() * b.terms_.size());
        for (const auto& ta : a.terms_)
            for (const auto& tb : b.terms_) acc.push_back({ta.key + tb.key, ta.coeff * tb.coeff});
        return from_terms(std::move(acc));
    }
    BiPoly pow(unsigned long e) const {
        BiPoly r = constant(1), base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }
    friend bool operator==(const BiPoly& a, const BiPoly& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].key != b.terms_[i].key || a.terms_[i].coeff != b.terms_[i].coeff) return false;
        return true;
    }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly swapped() const {
        std::vector<Term> acc;
        acc.reserve(terms_.size());
        for (const auto& t : terms_) acc.push_back({key(deg_w(t.key), deg_v(t.key)), t.coeff});
        return from_terms(std::move(acc));
    }

    /// f(P, Q): substitute polynomials for v and w.
    BiPoly substituted(const BiPoly& pv, const BiPoly& pw) const {
        std::vector<BiPoly> vpow{constant(1)}, wpow{constant(1)};
        BiPoly out;
        for (const auto& t : terms_) {
            uint32_t i = deg_v(t.key), j = deg_w(t.key);
            while (vpow.size() <= i) vpow.push_back(vpow.back() * pv);
            while (wpow.size() <= j) wpow.push_back(wpow.back() * pw);
            out = out + (vpow[i] * wpow[j]).scaled(t.coeff);
        }
        return out;
    }

    mpq_class eval(const mpq_class& v0, const mpq_class& w0) const {
        mpq_class acc = 0;
        for (const auto& t : terms_)
            acc += t.coeff * mpq_pow(v0, deg_v(t.key)) * mpq_pow(w0, deg_w(t.key));
        return acc;
    }

    /// Coefficients of v^0..v^kmax in f(v,1).
    std::vector<mpq_class> at_w1_coeffs(int kmax) const {
        std::vector<mpq_class> out(static_cast<size_t>(kmax) + 1);
        for (const auto& t : terms_)
            if (deg_v(t.key) <= static_cast<uint32_t>(kmax)) out[deg_v(t.key)] += t.coeff;
        return out;
    }

    /// Minimum p-adic valuation over coefficients; nullopt for the zero polynomial.
    std::optional<long> min_val_p(long p) const {
        std::optional<long> best;
        mpz_class pp(p);
        for (const auto& t : terms_) {
            auto v = mpq_val_p(t.coeff, pp);
            if (v && (!best || *v < *best)) best = *v;
        }
        return best;
    }

    BiPoly div_by_mpz(const mpz_class& d) const {
        BiPoly out;
        out.terms_.reserve(terms_.size());
        for (const auto& t : terms_) out.terms_.push_back({t.key, t.coeff / mpq_class(d)});
        return out;
    }

    /// Render into a series ring, v and w mapped to the given variables.
    Series<CycScalar> as_series(int arity, int order, int var_v, int var_w, const CycScalar& proto) const {
        std::vector<typename Series<CycScalar>::Term> acc;
        for (const auto& t : terms_) {
            uint32_t i = deg_v(t.key), j = deg_w(t.key);
            if (i + j > static_cast<uint32_t>(order)) continue;
            Multidx m;
            m.deg = static_cast<uint16_t>(i + j);
            m.e[static_cast<size_t>(var_v)] = static_cast<uint8_t>(i);
            m.e[static_cast<size_t>(var_w)] = static_cast<uint8_t>(m.e[static_cast<size_t>(var_w)] + j);
            acc.push_back({m, proto.make_from_rational(t.coeff)});
        }
        return Series<CycScalar>::from_terms(arity, order, proto, std::move(acc));
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            os << "(" << mpq_str(t.coeff) << ")";
            if (deg_v(t.key)) os << "*v" << (deg_v(t.key) > 1 ? "^" + std::to_string(deg_v(t.key)) : "");
            if (deg_w(t.key)) os << "*w" << (deg_w(t.key) > 1 ? "^" + std::to_string(deg_w(t.key)) : "");
            first = false;
        }
        return os.str();
    }

private:
    static BiPoly from_terms(std::vector<Term> v) {
        std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
        BiPoly out;
        out.terms_.reserve(v.size());
        for (auto& t : v) {
            if (!out.terms_.empty() && out.terms_.back().key == t.key)
                out.terms_.back().coeff += t.coeff;
            else
                out.terms_.push_back(std::move(t));
        }
        std::erase_if(out.terms_, [](const Term& t) { return t.coeff == 0; });
        return out;
    }

    std::vector<Term> terms_;  // sorted by key, no zeros
};

/// f_p(v,w) = (1/2)(+-(+-v+w)^p + v^p -+ w^p); upper sign for q^t = q.
inline BiPoly fp_poly(long p, PolySign sign) {
    if (!is_odd_prime(p)) throw std::invalid_argument("fp_poly: p must be an odd prime");
    BiPoly v = BiPoly::var_v(), w = BiPoly::var_w();
    mpq_class half(1, 2);
    if (sign == PolySign::Upper)
        return ((v + w).pow(static_cast<unsigned long>(p)) + v.pow(static_cast<unsigned long>(p)) -
                w.pow(static_cast<unsigned long>(p)))
            .scaled(half);
    return ((v.scaled(-1) + w).pow(static_cast<unsigned long>(p)).scaled(-1) +
            v.pow(static_cast<unsigned long>(p)) + w.pow(static_cast<unsigned long>(p)))
        .scaled(half);
}

namespace detail {
/// One composition step: C -> f_q(C(v,w), C(w,v)).
inline BiPoly fp_step(long q, PolySign sign, const BiPoly& c) {
    return fp_poly(q, sign).substituted(c, c.swapped());
}
}  // namespace detail

/**
 * f_{pp'}(v,w)   = f_{p'}(f_p(v,w), f_p(w,v));
 * f_{pp'p''}(v,w)= f_p(f_{p'}(f_{p''}(v,w), f_{p''}(w,v)), f_{p'}(f_{p''}(w,v), f_{p''}(v,w))).
 * (Pairs nest first-listed innermost, triples first-listed outermost.)
 */
inline BiPoly compose_fp(const std::vector<long>& primes, PolySign sign) {
    if (primes.size() == 2)
        return detail::fp_step(primes[1], sign, fp_poly(primes[0], sign));
    if (primes.size() == 3)
        return detail::fp_step(primes[0], sign, detail::fp_step(primes[1], sign, fp_poly(primes[2], sign)));
    throw std::invalid_argument("compose_fp: need 2 or 3 primes");
}

/// Independent scalar evaluation of the same nesting (no polynomial arithmetic).
inline mpq_class compose_fp_eval(const std::vector<long>& primes, PolySign sign, const mpq_class& v0,
                                 const mpq_class& w0) {
    auto fp = [&](long p, const mpq_class& a, const mpq_class& b) -> mpq_class {
        unsigned long up = static_cast<unsigned long>(p);
        if (sign == PolySign::Upper) return mpq_class((mpq_pow(a + b, up) + mpq_pow(a, up) - mpq_pow(b, up)) / 2);
        return mpq_class((-mpq_pow(mpq_class(b - a), up) + mpq_pow(a, up) + mpq_pow(b, up)) / 2);
    };
    if (primes.size() == 2)
        return fp(primes[1], fp(primes[0], v0, w0), fp(primes[0], w0, v0));
    if (primes.size() == 3) {
        long p = primes[0], p2 = primes[1], p3 = primes[2];
        return fp(p, fp(p2, fp(p3, v0, w0), fp(p3, w0, v0)), fp(p2, fp(p3, w0, v0), fp(p3, v0, w0)));
    }
    throw std::invalid_argument("compose_fp_eval: need 2 or 3 primes");
}

/// g_{pp'} = f_{pp'} - f_{p'p};  g_{pp'p''} = f_{pp'p''} - f_{p'pp''} - f_{p''pp'} + f_{p''p'p}.
inline BiPoly g_poly(const std::vector<long>& primes, PolySign sign) {
    if (primes.size() == 2) {
        long p = primes[0], p2 = primes[1];
        return compose_fp({p, p2}, sign) - compose_fp({p2, p}, sign);
    }
    if (primes.size() == 3) {
        long p = primes[0], p2 = primes[1], p3 = primes[2];
        return compose_fp({p, p2, p3}, sign) - compose_fp({p2, p, p3}, sign) - compose_fp({p3, p, p2}, sign) +
               compose_fp({p3, p2, p}, sign);
    }
    throw std::invalid_argument("g_poly: need 2 or 3 primes");
}

/// Degree <= 2 part of g(v,1): the certificate the congruences pin down.
inline std::vector<mpq_class> congruence_extract(const BiPoly& g) { return g.at_w1_coeffs(2); }

/**
 * Corner reduction: the polynomial action induced on the upper-corner block,
 * entrywise F_p(B)_{ij} = f_p(B_ij, B_ji). Tracking the (i,j) slot of an
 * off-diagonal pair as one bivariate polynomial (its (j,i) mate is the swap)
 * turns lift composition into BiPoly substitution.
 */
inline BiPoly corner_apply(long p, PolySign sign, const BiPoly& state) { return detail::fp_step(p, sign, state); }

/// p'p'' * phi_{pp'p''}(B_ij) computed through the corner model.
inline BiPoly corner_three_commutator(long p, long p2, long p3, PolySign sign) {
    BiPoly b = BiPoly::var_v();
    auto comp = [&](long a, long bb, long c) {
        // phi_a phi_b phi_c evaluates the leftmost map first
        return corner_apply(c, sign, corner_apply(bb, sign, corner_apply(a, sign, b)));
    };
    return comp(p, p2, p3) - comp(p, p3, p2) - comp(p2, p3, p) + comp(p3, p2, p);
}

/**
 * Engine cross-check of the corner reduction: substituting
 * T -> [[0,B],[0,0]] into the full Phi0 must give [[0, F_p(B)], [0,0]].
 */
inline CheckResult corner_consistency(const FormMatrix& q, long p, int order) {
    if (q.n % 2 != 0) throw std::invalid_argument("corner_consistency: needs n = 2r");
    const int n = q.n, r = n / 2, arity = n * n;
    PolySign sign = q.sign == 1 ? PolySign::Upper : PolySign::Lower;
    auto lift = chern_lift(q, p, order);
    auto proto = lift.phi0.proto();
    std::vector<Series<CycScalar>> images;
    images.reserve(static_cast<size_t>(arity));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool corner = i < r && j >= r;
            images.push_back(corner ? Series<CycScalar>::variable(arity, order, i * n + j, proto)
                                    : Series<CycScalar>::zero(arity, order, proto));
        }
    auto fp = fp_poly(p, sign);
    auto namer = [&](int v) { return "T_" + std::to_string(v / n + 1) + std::to_string(v % n + 1); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            auto got = lift.image(i, j).substitute(images);
            Series<CycScalar> want = Series<CycScalar>::zero(arity, order, proto);
            if (i < r && j >= r) {
                // B_ab = T_{a, r+b}; slot (a,b) = (i, j-r) pairs with variable T_{j-r, r+i}
                int var_v = i * n + j;
                int var_w = (j - r) * n + (r + i);
                want = fp.as_series(arity, order, var_v, var_w, proto);
            }
            auto diff = got - want;
            if (!diff.is_zero()) {
                const auto& t = diff.terms().front();
                return {false, "corner mismatch at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                   "), monomial " + diff.monomial_str(t.idx, namer) + ", difference " + t.coeff.str()};
            }
        }
    return {true, ""};
}

/// Sigma_p applied to a matrix a with invertible constant term:
/// Sigma_p(a) = a^{(p)} {(a^{-1})^{(p)} a^{(p)}}^{-1/2}.
inline SeriesMatrix<CycScalar> sigma_so_of(const SeriesMatrix<CycScalar>& a, long p) {
    auto ap = a.entrywise_power(static_cast<unsigned long>(p));
    auto inner = a.inverse().entrywise_power(static_cast<unsigned long>(p)) * ap;
    auto u = inner - SeriesMatrix<CycScalar>::identity(a.dim(), a.arity(), a.order(), a.proto());
    return ap * binomial_power(u, mpq_class(-1, 2));
}

/// Sigma_p on a = 1 + (generic r x r block of variables).
inline SeriesMatrix<CycScalar> sigma_so(long p, int r, int order,
                                        std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    auto proto = CycScalar::zero(cfg);
    auto a = SeriesMatrix<CycScalar>::one_plus_generators(r, order, proto);
    return sigma_so_of(a, p);
}

/// 3x3 unipotent [[1,u,v],[0,1,w],[0,0,1]]: Sigma_p has corner f_p(v, uw - v).
inline CheckResult so_unipotent_check(long p, int order,
                                      std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    if (order < 2 * p) throw std::invalid_argument("so_unipotent_check: order must reach 2p");
    auto proto = CycScalar::zero(cfg);
    const int arity = 3;
    auto var = [&](int i) { return Series<CycScalar>::variable(arity, order, i, proto); };
    auto one = Series<CycScalar>::constant(arity, order, proto.make_from_rational(1));
    auto zero = Series<CycScalar>::zero(arity, order, proto);
    SeriesMatrix<CycScalar> a(3, arity, order, proto);
    a.at(0, 0) = one;  a.at(0, 1) = var(0); a.at(0, 2) = var(1);
    a.at(1, 0) = zero; a.at(1, 1) = one;    a.at(1, 2) = var(2);
    a.at(2, 0) = zero; a.at(2, 1) = zero;   a.at(2, 2) = one;
    auto got = sigma_so_of(a, p);

    auto fp = fp_poly(p, PolySign::Upper);
    // f_p(v, uw - v) in the u,v,w ring
    auto uvw_u = var(0), uvw_v = var(1), uvw_w = var(2);
    auto arg2 = uvw_u * uvw_w - uvw_v;
    std::vector<Series<CycScalar>> vpow{one}, wpow{one};
    Series<CycScalar> corner = zero;
    for (const auto& t : fp.terms()) {
        uint32_t i = BiPoly::deg_v(t.key), j = BiPoly::deg_w(t.key);
        while (vpow.size() <= i) vpow.push_back(vpow.back() * uvw_v);
        while (wpow.size() <= j) wpow.push_back(wpow.back() * arg2);
        corner += (vpow[i] * wpow[j]).scaled(t.coeff);
    }
    SeriesMatrix<CycScalar> want(3, arity, order, proto);
    want.at(0, 0) = one;  want.at(0, 1) = var(0).pow(static_cast<unsigned long>(p)); want.at(0, 2) = corner;
    want.at(1, 0) = zero; want.at(1, 1) = one;    want.at(1, 2) = var(2).pow(static_cast<unsigned long>(p));
    want.at(2, 0) = zero; want.at(2, 1) = zero;   want.at(2, 2) = one;
    return detail::matrices_equal(got, want, "SO unipotent formula");
}

/**
 * Exact composition on the unipotent: state (U,V,W) maps to
 * (U^p, f_p(V, UW - V), W^p); applying p then p' must land on
 * f_{pp'}(v, uw-v) in the corner, and the two orders differ by
 * g_{pp'}(v, uw-v).
 */
struct SoCompositionResult {
    bool matches_composed = false;
    bool commutator_matches_g = false;
    bool commutator_nonzero = false;
};

inline SoCompositionResult so_unipotent_composition(long p, long p2,
                                                    std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    const int arity = 3;
    const int order = static_cast<int>(2 * p * p2);
    auto proto = CycScalar::zero(cfg);
    auto var = [&](int i) { return Series<CycScalar>::variable(arity, order, i, proto); };
    auto eval_bipoly = [&](const BiPoly& f, const Series<CycScalar>& a, const Series<CycScalar>& b) {
        auto one = Series<CycScalar>::constant(arity, order, proto.make_from_rational(1));
        std::vector<Series<CycScalar>> apow{one}, bpow{one};
        Series<CycScalar> out = Series<CycScalar>::zero(arity, order, proto);
        for (const auto& t : f.terms()) {
            uint32_t i = BiPoly::deg_v(t.key), j = BiPoly::deg_w(t.key);
            while (apow.size() <= i) apow.push_back(apow.back() * a);
            while (bpow.size() <= j) bpow.push_back(bpow.back() * b);
            out += (apow[i] * bpow[j]).scaled(t.coeff);
        }
        return out;
    };
    struct State {
        Series<CycScalar> u, v, w;
    };
    auto apply = [&](long pr, const State& s) {
        auto fp = fp_poly(pr, PolySign::Upper);
        return State{s.u.pow(static_cast<unsigned long>(pr)), eval_bipoly(fp, s.v, s.u * s.w - s.v),
                     s.w.pow(static_cast<unsigned long>(pr))};
    };
    State id{var(0), var(1), var(2)};
    State pq = apply(p2, apply(p, id));   // phi_p then phi_{p'}
    State qp = apply(p, apply(p2, id));
    auto arg2 = var(0) * var(2) - var(1);
    SoCompositionResult res;
    res.matches_composed = (pq.v == eval_bipoly(compose_fp({p, p2}, PolySign::Upper), var(1), arg2)) &&
                           (pq.u == var(0).pow(static_cast<unsigned long>(p * p2)));
    auto diff = pq.v - qp.v;
    res.commutator_matches_g = (diff == eval_bipoly(g_poly({p, p2}, PolySign::Upper), var(1), arg2));
    res.commutator_nonzero = !diff.is_zero();
    return res;
}

/// r = 1 torus: Sigma_p(a) = a^p, so the SO lifts commute on SO(q) for n = 2.
inline CheckResult so_torus_check(long p, long p2, int order,
                                  std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    auto proto = CycScalar::zero(cfg);
    auto s1 = sigma_so(p, 1, order, cfg);
    auto a = SeriesMatrix<CycScalar>::one_plus_generators(1, order, proto);
    if (!(s1 == a.entrywise_power(static_cast<unsigned long>(p)))) return {false, "Sigma_p(a) != a^p for r=1"};
    // composition both ways = a^{pp'}
    auto img1 = std::vector<Series<CycScalar>>{s1.at(0, 0) - Series<CycScalar>::constant(1, order, proto.make_from_rational(1))};
    auto s2 = sigma_so(p2, 1, order, cfg);
    auto img2 = std::vector<Series<CycScalar>>{s2.at(0, 0) - Series<CycScalar>::constant(1, order, proto.make_from_rational(1))};
    auto comp12 = s2.at(0, 0).substitute(img1);  // phi_p then phi_{p'}
    auto comp21 = s1.at(0, 0).substitute(img2);
    if (!(comp12 == comp21)) return {false, "torus lifts do not commute"};
    return {true, ""};
}

/// lambda_p = (det(x^{(p)})/det(x)^p)^{-1/2} for n = 2.
inline Series<CycScalar> lambda_closed_form(long p, int order,
                                            std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    auto proto = CycScalar::zero(cfg);
    const int arity = 4;
    auto var = [&](int i) { return Series<CycScalar>::variable(arity, order, i, proto); };
    auto one = Series<CycScalar>::constant(arity, order, proto.make_from_rational(1));
    auto det_x = (one + var(0)) * (one + var(3)) - var(1) * var(2);
    auto det_xp = (one + var(0)).pow(static_cast<unsigned long>(p)) * (one + var(3)).pow(static_cast<unsigned long>(p)) -
                  (var(1) * var(2)).pow(static_cast<unsigned long>(p));
    auto ratio = det_xp * series_inverse(det_x.pow(static_cast<unsigned long>(p)));
    return series_binomial_power(ratio - one, mpq_class(-1, 2));
}

/// The closed-form n=2 symplectic lift Phi_p = lambda_p(x) * x^{(p)} as a FrobLift.
inline FrobLift lambda_closed_lift(long p, int order,
                                   std::shared_ptr<const RingConfig> cfg = RingConfig::rationals()) {
    auto proto = CycScalar::zero(cfg);
    auto lam = lambda_closed_form(p, order, cfg);
    auto x = SeriesMatrix<CycScalar>::one_plus_generators(2, order, proto);
    auto xp = x.entrywise_power(static_cast<unsigned long>(p));
    SeriesMatrix<CycScalar> phi0(2, 4, order, proto);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            phi0.at(i, j) = lam * xp.at(i, j);
            if (i == j) phi0.at(i, j) -= Series<CycScalar>::constant(4, order, proto.make_from_rational(1));
        }
    return FrobLift{p, 2, order, std::move(phi0)};
}

}  // namespace frobcurv
