#include "qpomdp/prob.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "qpomdp/error.hpp"

namespace qpomdp {

namespace {

// Reduced rational from a possibly unreduced pair, or overflow fallback.
bool reduce(std::int64_t& num, std::int64_t& den) {
    if (den == 0) return false;
    if (den < 0) {
        if (num == INT64_MIN || den == INT64_MIN) return false;
        num = -num;
        den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return true;
}

bool fits64(__int128 v) { return v >= INT64_MIN && v <= INT64_MAX; }

} // namespace

Prob Prob::from_ratio(std::int64_t num, std::int64_t den) {
    Prob p;
    if (!reduce(num, den)) throw InputError("invalid rational probability");
    p.num_ = num;
    p.den_ = den;
    p.exact_ = true;
    p.val_ = static_cast<double>(num) / static_cast<double>(den);
    return p;
}

Prob Prob::from_double(double v) {
    if (!std::isfinite(v)) throw InputError("non-finite probability");
    Prob p;
    p.exact_ = false;
    p.val_ = v;
    p.num_ = 0;
    p.den_ = 1;
    // Keep the common exact cases exact even when they arrive as doubles.
    if (v == 0.0) return Prob();
    if (v == 1.0) return from_ratio(1, 1);
    return p;
}

Prob Prob::operator+(const Prob& o) const {
    if (exact_ && o.exact_) {
        __int128 n = static_cast<__int128>(num_) * o.den_ +
                     static_cast<__int128>(o.num_) * den_;
        __int128 d = static_cast<__int128>(den_) * o.den_;
        // reduce in 128 bits before the fit check
        auto abs128 = [](__int128 x) { return x < 0 ? -x : x; };
        __int128 a = abs128(n), b = d;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        if (fits64(n) && fits64(d))
            return from_ratio(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d));
    }
    return from_double(val_ + o.val_);
}

Prob Prob::operator*(const Prob& o) const {
    if (exact_ && o.exact_) {
        // cross-reduce first so products of reduced rationals rarely overflow
        std::int64_t a = num_, b = den_, c = o.num_, d = o.den_;
        std::int64_t g1 = std::gcd(a < 0 ? -a : a, d);
        if (g1 > 1) {
            a /= g1;
            d /= g1;
        }
        std::int64_t g2 = std::gcd(c < 0 ? -c : c, b);
        if (g2 > 1) {
            c /= g2;
            b /= g2;
        }
        __int128 n = static_cast<__int128>(a) * c;
        __int128 den = static_cast<__int128>(b) * d;
        if (fits64(n) && fits64(den))
            return from_ratio(static_cast<std::int64_t>(n), static_cast<std::int64_t>(den));
    }
    return from_double(val_ * o.val_);
}

bool Prob::operator==(const Prob& o) const {
    if (exact_ && o.exact_) return num_ == o.num_ && den_ == o.den_;
    return val_ == o.val_;
}

std::string Prob::text() const {
    if (exact_) {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    return format_double(val_);
}

std::string format_double(double v) {
    // shortest representation that parses back to the same double
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        auto [p, ec] = std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
        (void)p;
        if (ec == std::errc() && back == v) break;
    }
    return buf;
}

Prob parse_prob(const std::string& tok, bool require_unit) {
    if (tok.empty()) throw InputError("empty probability");
    Prob p;
    auto slash = tok.find('/');
    bool parsed = false;
    if (slash != std::string::npos) {
        std::int64_t num = 0, den = 0;
        auto r1 = std::from_chars(tok.data(), tok.data() + slash, num);
        auto r2 = std::from_chars(tok.data() + slash + 1, tok.data() + tok.size(), den);
        if (r1.ec != std::errc() || r1.ptr != tok.data() + slash || r2.ec != std::errc() ||
            r2.ptr != tok.data() + tok.size() || den <= 0)
            throw InputError("bad rational '" + tok + "'");
        p = Prob::from_ratio(num, den);
        parsed = true;
    }
    if (!parsed && tok.find('.') == std::string::npos && tok.find('e') == std::string::npos &&
        tok.find('E') == std::string::npos) {
        std::int64_t num = 0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), num);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
            throw InputError("bad probability '" + tok + "'");
        p = Prob::from_ratio(num, 1);
        parsed = true;
    }
    if (!parsed) {
        double v = 0.0;
        auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size())
            throw InputError("bad probability '" + tok + "'");
        p = Prob::from_double(v);
    }
    if (require_unit && (p.value() < 0.0 || p.value() > 1.0))
        throw InputError("probability '" + tok + "' outside [0,1]");
    return p;
}

bool sums_to_one(const std::vector<Prob>& ps) {
    bool all_exact = true;
    for (const auto& p : ps) all_exact = all_exact && p.exact();
    if (all_exact) {
        Prob sum = Prob::zero();
        for (const auto& p : ps) {
            sum = sum + p;
            if (!sum.exact()) {
                all_exact = false;
                break;
            }
        }
        if (all_exact) return sum.is_one();
    }
    double s = 0.0;
    for (const auto& p : ps) s += p.value();
    return std::fabs(s - 1.0) <= 1e-9;
}

} // namespace qpomdp
