#pragma once

// Extended rationals p/q (curve slopes on the four-punctured sphere) and the
// Farey-neighbour structure of the ideal-triangle tessellation.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "thurston/error.hpp"

namespace thurston {

using Integer = boost::multiprecision::cpp_int;

/// Residue class of a cusp modulo the level-2 congruence subgroup. The three
/// classes are the orbits of 0, 1 and infinity; the vertices of any Farey
/// triangle fall into three distinct classes.
enum class CuspClass { Zero, One, Infinity };

constexpr std::string_view to_string(CuspClass c) {
    switch (c) {
        case CuspClass::Zero: return "0";
        case CuspClass::One: return "1";
        case CuspClass::Infinity: return "inf";
    }
    return "?";
}

/// A reduced extended rational. Invariant: gcd(|p|, q) = 1, q >= 0, and
/// q = 0 implies p = 1.
class Slope {
public:
    /// The slope 0/1.
    Slope() : p_(0), q_(1) {}

    /// Reduces (p, q) to canonical form; (0, 0) throws InvalidSlope.
    static Slope normalize(Integer p, Integer q) {
        if (p == 0 && q == 0) throw Error(Errc::InvalidSlope, "0/0 is not a slope");
        if (q == 0) return Slope(1, 0);
        if (q < 0) {
            p = -p;
            q = -q;
        }
        Integer g = boost::multiprecision::gcd(abs(p), q);
        return Slope(p / g, q / g);
    }

    static Slope infinity() { return Slope(1, 0); }
    static Slope integer(long long n) { return Slope(Integer(n), 1); }

    /// Parses "p/q", "n", or "inf".
    static Slope parse(std::string_view text) {
        std::string s(text);
        if (s == "inf" || s == "1/0" || s == "-1/0") return infinity();
        try {
            auto slash = s.find('/');
            if (slash == std::string::npos) return normalize(Integer(s), 1);
            return normalize(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(Errc::InvalidSlope, "cannot parse slope '" + s + "'");
        }
    }

    const Integer& p() const { return p_; }
    const Integer& q() const { return q_; }
    bool is_infinite() const { return q_ == 0; }

    double to_double() const {
        return is_infinite() ? std::numeric_limits<double>::infinity()
                             : p_.convert_to<double>() / q_.convert_to<double>();
    }

    CuspClass cusp_class() const {
        bool p_odd = bit_test(abs(p_), 0);
        bool q_odd = bit_test(q_, 0);
        if (!q_odd) return CuspClass::Infinity;
        return p_odd ? CuspClass::One : CuspClass::Zero;
    }

    std::string to_string() const {
        if (is_infinite()) return "inf";
        if (q_ == 1) return p_.str();
        return p_.str() + "/" + q_.str();
    }

    /// Height max(|p|, q).
    Integer height() const { return abs(p_) > q_ ? Integer(abs(p_)) : q_; }

    friend bool operator==(const Slope& a, const Slope& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

    /// Orders by rational value, with infinity last.
    friend std::strong_ordering operator<=>(const Slope& a, const Slope& b) {
        if (a.is_infinite() || b.is_infinite()) {
            return a.is_infinite() <=> b.is_infinite();
        }
        Integer lhs = a.p_ * b.q_;
        Integer rhs = b.p_ * a.q_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Slope& s) { return os << s.to_string(); }

private:
    Slope(Integer p, Integer q) : p_(std::move(p)), q_(std::move(q)) {}

    Integer p_;
    Integer q_;
};

/// Inline literal helper, mostly for tests: slope(1, 3) == 1/3.
inline Slope slope(long long p, long long q) { return Slope::normalize(p, q); }

/// An isotopy class of curves: an essential class (a slope) or the symbol for
/// all non-essential curves.
class CurveClass {
public:
    static CurveClass non_essential() { return CurveClass(); }
    CurveClass(Slope s) : slope_(std::move(s)) {}

    bool is_essential() const { return slope_.has_value(); }
    const Slope& slope() const { return *slope_; }

    static CurveClass parse(std::string_view text) {
        if (text == "o") return non_essential();
        return CurveClass(Slope::parse(text));
    }

    std::string to_string() const { return slope_ ? slope_->to_string() : "o"; }

    friend bool operator==(const CurveClass&, const CurveClass&) = default;

    /// Non-essential sorts first, then slopes by value.
    friend std::strong_ordering operator<=>(const CurveClass& a, const CurveClass& b) {
        if (!a.slope_ || !b.slope_) return a.slope_.has_value() <=> b.slope_.has_value();
        return *a.slope_ <=> *b.slope_;
    }

    friend std::ostream& operator<<(std::ostream& os, const CurveClass& c) { return os << c.to_string(); }

private:
    CurveClass() = default;
    std::optional<Slope> slope_;
};

inline Integer farey_determinant(const Slope& a, const Slope& b) { return a.p() * b.q() - a.q() * b.p(); }

inline bool is_farey_neighbor(const Slope& a, const Slope& b) {
    if (a == b) throw Error(Errc::InvalidPair, "a slope is not its own Farey neighbour");
    return abs(farey_determinant(a, b)) == 1;
}

/// (p_a + p_b) / (q_a + q_b) for Farey neighbours.
inline Slope mediant(const Slope& a, const Slope& b) {
    if (!is_farey_neighbor(a, b)) {
        throw Error(Errc::InvalidPair, a.to_string() + " and " + b.to_string() + " are not Farey neighbours");
    }
    return Slope::normalize(a.p() + b.p(), a.q() + b.q());
}

}  // namespace thurston
