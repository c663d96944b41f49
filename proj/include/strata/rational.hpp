/**
 * Exact rational scalars.
 *
 * Thin layer over GMP's mpq_class: canonical form (lowest terms, positive
 * denominator) is maintained by GMP itself.  String round-tripping uses the
 * "p/q" form with "p" alone when the denominator is 1, which is also the
 * wire format used in all JSON files.
 */
#ifndef STRATA_RATIONAL_HPP
#define STRATA_RATIONAL_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace strata {

using Rat = mpq_class;

inline int sgn(const Rat& x) { return mpq_sgn(x.get_mpq_t()); }

inline std::string rat_to_string(const Rat& x) {
    Rat c = x;
    c.canonicalize();  // constructor-built values like Rat(3, 6) arrive raw
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

/// Parses "p", "-p", or "p/q".  Returns nullopt on malformed input or a
/// zero denominator rather than throwing, so callers can map bad input to
/// their own error channel.
inline std::optional<Rat> rat_from_string(const std::string& s) {
    if (s.empty()) return std::nullopt;
    // mpq_class(str) accepts whitespace and other bases; be stricter here.
    std::size_t slash = std::string::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '/') {
            if (slash != std::string::npos) return std::nullopt;
            slash = i;
            continue;
        }
        if (c == '-') {
            if (i != 0) return std::nullopt;  // sign lives on the numerator only
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
    }
    if (slash == 0 || slash == s.size() - 1) return std::nullopt;
    try {
        Rat x(s);
        if (x.get_den() == 0) return std::nullopt;
        x.canonicalize();
        return x;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

using RatVec = std::vector<Rat>;

inline Rat dot(const RatVec& a, const RatVec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline bool is_zero_vec(const RatVec& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

/// Scales a nonzero rational vector to the unique integer vector with
/// coprime entries, keeping direction.  Used for normals and interior rays.
inline RatVec primitive_ray(const RatVec& v) {
    mpz_class den_lcm = 1;
    for (const Rat& x : v) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), x.get_den().get_mpz_t());
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    for (const Rat& x : v) ints.push_back(x.get_num() * (den_lcm / x.get_den()));
    mpz_class g = 0;
    for (const mpz_class& z : ints) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.get_mpz_t());
    RatVec out(v.size());
    if (g == 0) return out;  // zero vector stays zero
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Rat(ints[i] / g);
    return out;
}

}  // namespace strata

#endif
