#pragma once

#include <array>
#include <cstring>
#include <functional>
#include <limits>

#include "frobcurv/cyclotomic.hpp"

namespace frobcurv {

struct divisibility_error : std::runtime_error {
    divisibility_error(long p, std::string monomial)
        : std::runtime_error("divisibility violation at prime " + std::to_string(p) + " on monomial " + monomial),
          prime(p),
          monomial(std::move(monomial)) {}
    long prime;
    std::string monomial;
};

/// Packed exponent vector: up to 64 variables, per-variable degree <= 255.
struct Multidx {
    static constexpr int kMaxArity = 64;
    uint16_t deg = 0;
    std::array<uint8_t, kMaxArity> e{};

    static Multidx unit(int var) {
        Multidx m;
        m.deg = 1;
        m.e[static_cast<size_t>(var)] = 1;
        return m;
    }
    friend Multidx operator+(const Multidx& a, const Multidx& b) {
        Multidx r;
        r.deg = static_cast<uint16_t>(a.deg + b.deg);
        for (int i = 0; i < kMaxArity; ++i) r.e[static_cast<size_t>(i)] = static_cast<uint8_t>(a.e[static_cast<size_t>(i)] + b.e[static_cast<size_t>(i)]);
        return r;
    }
    friend bool operator==(const Multidx& a, const Multidx& b) {
        return a.deg == b.deg && std::memcmp(a.e.data(), b.e.data(), kMaxArity) == 0;
    }
    // graded lexicographic
    friend bool operator<(const Multidx& a, const Multidx& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        return std::memcmp(a.e.data(), b.e.data(), kMaxArity) > 0;  // higher first exponent ranks earlier
    }
};

/**
 * Sparse truncated multivariate power series over an exact coefficient ring R:
 * an element of R[[T_1..T_m]] / (T)^{order+1}.
 *
 * Terms are kept in graded-lex order with no stored zeros, so equality and
 * rendering are canonical. The truncation order is part of the value; mixing
 * orders or arities is an error, never a silent coercion.
 */
template <typename R>
class Series {
public:
    struct Term {
        Multidx idx;
        R coeff;
    };

    Series(int arity, int order, R proto)
        : arity_(arity), order_(order), proto_(std::move(proto)) {
        if (arity < 1 || arity > Multidx::kMaxArity) throw std::invalid_argument("Series: arity out of range");
        if (order < 0 || order > 255) throw std::invalid_argument("Series: order out of range");
    }

    static Series zero(int arity, int order, const R& proto) { return Series(arity, order, proto); }
    static Series constant(int arity, int order, const R& value) {
        Series s(arity, order, value.make_zero());
        if (!value.is_zero()) s.terms_.push_back({Multidx{}, value});
        return s;
    }
    static Series variable(int arity, int order, int var, const R& proto) {
        Series s(arity, order, proto);
        if (var < 0 || var >= arity) throw std::invalid_argument("Series: variable index out of range");
        if (order >= 1) s.terms_.push_back({Multidx::unit(var), proto.make_from_rational(1)});
        return s;
    }
    static Series from_terms(int arity, int order, const R& proto, std::vector<Term> terms) {
        Series s(arity, order, proto);
        std::erase_if(terms, [order](const Term& t) { return t.idx.deg > order; });
        s.terms_ = normalize(std::move(terms));
        return s;
    }

    int arity() const { return arity_; }
    int order() const { return order_; }
    const R& proto() const { return proto_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    R coeff(const Multidx& idx) const {
        if (idx.deg > order_) throw std::invalid_argument("Series::coeff: degree beyond truncation order");
        auto it = std::lower_bound(terms_.begin(), terms_.end(), idx,
                                   [](const Term& t, const Multidx& m) { return t.idx < m; });
        if (it != terms_.end() && it->idx == idx) return it->coeff;
        return proto_.make_zero();
    }
    R coeff(const std::vector<int>& exps) const { return coeff(pack(exps)); }
    R coeff(std::initializer_list<int> exps) const { return coeff(std::vector<int>(exps)); }
    R constant_term() const { return coeff(Multidx{}); }

    /// Smallest total degree carrying a nonzero coefficient.
    std::optional<int> leading_degree() const {
        if (terms_.empty()) return std::nullopt;
        return static_cast<int>(terms_.front().idx.deg);
    }

    Multidx pack(const std::vector<int>& exps) const {
        if (static_cast<int>(exps.size()) != arity_) throw std::invalid_argument("Series: exponent arity mismatch");
        Multidx m;
        int d = 0;
        for (int i = 0; i < arity_; ++i) {
            if (exps[static_cast<size_t>(i)] < 0 || exps[static_cast<size_t>(i)] > 255)
                throw std::invalid_argument("Series: exponent out of range");
            m.e[static_cast<size_t>(i)] = static_cast<uint8_t>(exps[static_cast<size_t>(i)]);
            d += exps[static_cast<size_t>(i)];
        }
        m.deg = static_cast<uint16_t>(d);
        return m;
    }

    friend Series operator+(const Series& a, const Series& b) {
        a.check_shape(b);
        Series out(a.arity_, a.order_, a.proto_);
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() || j < b.terms_.size()) {
            if (j >= b.terms_.size() || (i < a.terms_.size() && a.terms_[i].idx < b.terms_[j].idx)) {
                out.terms_.push_back(a.terms_[i++]);
            } else if (i >= a.terms_.size() || b.terms_[j].idx < a.terms_[i].idx) {
                out.terms_.push_back(b.terms_[j++]);
            } else {
                R c = a.terms_[i].coeff + b.terms_[j].coeff;
                if (!c.is_zero()) out.terms_.push_back({a.terms_[i].idx, std::move(c)});
                ++i;
                ++j;
            }
        }
        return out;
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
    Series operator-() const {
        Series out = *this;
        for (auto& t : out.terms_) t.coeff = -t.coeff;
        return out;
    }
    Series& operator+=(const Series& b) { return *this = *this + b; }
    Series& operator-=(const Series& b) { return *this = *this - b; }

    /// Truncated product: all terms of total degree > order are discarded.
    friend Series operator*(const Series& a, const Series& b) {
        a.check_shape(b);
        std::vector<Term> acc;
        acc.reserve(a.terms_.size() * 2 + b.terms_.size());
        for (const auto& ta : a.terms_) {
            const int room = a.order_ - ta.idx.deg;
            for (const auto& tb : b.terms_) {
                if (tb.idx.deg > room) break;  // graded order: everything after is too big
                R c = ta.coeff * tb.coeff;
                if (!c.is_zero()) acc.push_back({ta.idx + tb.idx, std::move(c)});
            }
        }
        Series out(a.arity_, a.order_, a.proto_);
        out.terms_ = normalize(std::move(acc));
        return out;
    }
    Series& operator*=(const Series& b) { return *this = *this * b; }

    Series scaled(const R& c) const {
        Series out(arity_, order_, proto_);
        if (c.is_zero()) return out;
        out.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            R v = t.coeff * c;
            if (!v.is_zero()) out.terms_.push_back({t.idx, std::move(v)});
        }
        return out;
    }
    Series scaled(const mpq_class& q) const { return scaled(proto_.make_from_rational(q)); }

    Series pow(unsigned long e) const {
        Series r = constant(arity_, order_, proto_.make_from_rational(1));
        Series base = *this;
        while (e > 0) {
            if (e & 1) r = r * base;
            e >>= 1;
            if (e) base = base * base;
        }
        return r;
    }

    friend bool operator==(const Series& a, const Series& b) {
        a.check_shape(b);
        if (a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (!(a.terms_[i].idx == b.terms_[i].idx) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
        return true;
    }
    friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

    Series truncated(int mu) const {
        if (mu > order_) throw std::invalid_argument("Series: cannot extend truncation order");
        Series out(arity_, mu, proto_);
        for (const auto& t : terms_) {
            if (t.idx.deg > mu) break;
            out.terms_.push_back(t);
        }
        return out;
    }

    /// Graded part of exact total degree d, kept at the same order.
    Series graded_part(int d) const {
        Series out(arity_, order_, proto_);
        for (const auto& t : terms_)
            if (t.idx.deg == d) out.terms_.push_back(t);
        return out;
    }

    /**
     * Substitution T_i -> images[i]. Every image must share this shape and
     * have zero constant term, so the augmentation filtration is preserved
     * and the truncated result is exact.
     */
    Series substitute(const std::vector<Series>& images) const {
        if (static_cast<int>(images.size()) != arity_)
            throw std::invalid_argument("Series::substitute: one image per variable required");
        for (const auto& g : images) {
            check_shape(g);
            if (!g.constant_term().is_zero())
                throw std::invalid_argument("Series::substitute: image with nonzero constant term");
        }
        // power cache per variable, built on demand; g^k = 0 beyond k > order
        std::vector<std::vector<Series>> powers(static_cast<size_t>(arity_));
        auto var_power = [&](int v, int k) -> const Series& {
            auto& cache = powers[static_cast<size_t>(v)];
            if (cache.empty()) {
                cache.push_back(constant(arity_, order_, proto_.make_from_rational(1)));
                cache.push_back(images[static_cast<size_t>(v)]);
            }
            while (static_cast<int>(cache.size()) <= k) cache.push_back(cache.back() * images[static_cast<size_t>(v)]);
            return cache[static_cast<size_t>(k)];
        };
        std::vector<Term> acc;
        for (const auto& t : terms_) {
            Series prod = constant(arity_, order_, t.coeff);
            for (int v = 0; v < arity_ && !prod.is_zero(); ++v) {
                int k = t.idx.e[static_cast<size_t>(v)];
                if (k == 0) continue;
                if (k > order_) {
                    prod = zero(arity_, order_, proto_);
                    break;
                }
                prod = prod * var_power(v, k);
            }
            acc.insert(acc.end(), prod.terms_.begin(), prod.terms_.end());
        }
        Series out(arity_, order_, proto_);
        out.terms_ = normalize(std::move(acc));
        return out;
    }

    std::string render(const std::function<std::string(int)>& var_name) const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& t : terms_) {
            if (!first) os << " + ";
            os << "(" << t.coeff.str() << ")";
            if (t.idx.deg > 0) os << "*" << monomial_str(t.idx, var_name);
            first = false;
        }
        return os.str();
    }

    std::string monomial_str(const Multidx& idx, const std::function<std::string(int)>& var_name) const {
        if (idx.deg == 0) return "1";
        std::ostringstream os;
        bool first = true;
        for (int v = 0; v < arity_; ++v) {
            int k = idx.e[static_cast<size_t>(v)];
            if (k == 0) continue;
            if (!first) os << "*";
            os << var_name(v);
            if (k > 1) os << "^" << k;
            first = false;
        }
        return os.str();
    }

    void check_shape(const Series& b) const {
        if (arity_ != b.arity_ || order_ != b.order_)
            throw std::invalid_argument("Series: arity/order mismatch");
    }

private:
    static std::vector<Term> normalize(std::vector<Term> v) {
        std::sort(v.begin(), v.end(), [](const Term& a, const Term& b) { return a.idx < b.idx; });
        std::vector<Term> out;
        out.reserve(v.size());
        for (auto& t : v) {
            if (!out.empty() && out.back().idx == t.idx)
                out.back().coeff += t.coeff;
            else
                out.push_back(std::move(t));
        }
        std::erase_if(out, [](const Term& t) { return t.coeff.is_zero(); });
        return out;
    }

    int arity_;
    int order_;
    R proto_;
    std::vector<Term> terms_;
};

/// Coefficientwise sigma_p.
inline Series<CycScalar> galois_map(const Series<CycScalar>& f, long p) {
    std::vector<Series<CycScalar>::Term> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back({t.idx, cyc_frobenius(t.coeff, p)});
    return Series<CycScalar>::from_terms(f.arity(), f.order(), f.proto(), std::move(terms));
}

/**
 * Exact division of every coefficient by d, after certifying that for each
 * witness prime p | d the coefficient carries at least val_p(d) powers of p.
 * The check is the point: a violation signals either an engine bug or a
 * failure of the expected integrality, and is reported, not patched over.
 */
inline Series<CycScalar> div_exact_int(const Series<CycScalar>& f, const mpz_class& d,
                                       const std::vector<long>& p_witnesses) {
    if (d == 0) throw std::invalid_argument("div_exact_int: zero divisor");
    for (long p : p_witnesses) {
        mpz_class pp(p);
        if (!mpz_divisible_p(d.get_mpz_t(), pp.get_mpz_t())) continue;
        long mult = mpz_val_p(d, pp);
        for (const auto& t : f.terms()) {
            auto v = t.coeff.val_p(p);
            if (v && *v < mult)
                throw divisibility_error(p, f.monomial_str(t.idx, [](int i) { return "T" + std::to_string(i); }));
        }
    }
    std::vector<Series<CycScalar>::Term> terms;
    terms.reserve(f.terms().size());
    for (const auto& t : f.terms()) terms.push_back({t.idx, t.coeff.div_by_mpz(d)});
    return Series<CycScalar>::from_terms(f.arity(), f.order(), f.proto(), std::move(terms));
}

}  // namespace frobcurv
