#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lipgeo {

using Rational = boost::rational<std::int64_t>;

/// An exponent in Q extended by +infinity. INF is the unique maximum.
class ExpQ {
public:
    constexpr ExpQ() = default;
    ExpQ(std::int64_t n) : value_(Rational(n)) {}
    ExpQ(std::int64_t n, std::int64_t d) : value_(Rational(n, d)) {}
    explicit ExpQ(Rational r) : value_(r) {}

    static ExpQ inf() { return ExpQ(Tag{}); }

    bool is_inf() const { return !value_.has_value(); }
    bool is_finite() const { return value_.has_value(); }

    /// Throws on INF.
    const Rational& rational() const {
        if (!value_) throw std::logic_error("ExpQ::rational on INF");
        return *value_;
    }

    double to_double() const {
        if (!value_) return std::numeric_limits<double>::infinity();
        return boost::rational_cast<double>(*value_);
    }

    friend bool operator==(const ExpQ& a, const ExpQ& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const ExpQ& a, const ExpQ& b) {
        if (a.is_inf() || b.is_inf()) {
            if (a.is_inf() && b.is_inf()) return std::strong_ordering::equal;
            return a.is_inf() ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        if (*a.value_ < *b.value_) return std::strong_ordering::less;
        if (*b.value_ < *a.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    /// inf + x = inf.
    friend ExpQ operator+(const ExpQ& a, const ExpQ& b) {
        if (a.is_inf() || b.is_inf()) return inf();
        return ExpQ(*a.value_ + *b.value_);
    }

    std::string str() const {
        if (!value_) return "inf";
        if (value_->denominator() == 1) return std::to_string(value_->numerator());
        return std::to_string(value_->numerator()) + "/" + std::to_string(value_->denominator());
    }

    /// Accepts "int", "int/int" and "inf".
    static std::optional<ExpQ> parse(std::string_view text);

private:
    struct Tag {};
    explicit ExpQ(Tag) : value_(std::nullopt) {}

    std::optional<Rational> value_ = Rational(0);
};

inline std::ostream& operator<<(std::ostream& os, const ExpQ& e) { return os << e.str(); }

inline ExpQ min(const ExpQ& a, const ExpQ& b) { return b < a ? b : a; }
inline ExpQ max(const ExpQ& a, const ExpQ& b) { return a < b ? b : a; }

namespace detail {
inline std::optional<std::int64_t> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) return std::nullopt;
    std::int64_t v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return neg ? -v : v;
}
}  // namespace detail

inline std::optional<ExpQ> ExpQ::parse(std::string_view text) {
    if (text == "inf" || text == "INF") return inf();
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        auto n = detail::parse_int(text);
        if (!n) return std::nullopt;
        return ExpQ(*n);
    }
    auto n = detail::parse_int(text.substr(0, slash));
    auto d = detail::parse_int(text.substr(slash + 1));
    if (!n || !d || *d == 0) return std::nullopt;
    return ExpQ(*n, *d);
}

}  // namespace lipgeo

template <>
struct std::hash<lipgeo::ExpQ> {
    std::size_t operator()(const lipgeo::ExpQ& e) const noexcept {
        if (e.is_inf()) return 0x9e3779b97f4a7c15ull;
        auto h = std::hash<std::int64_t>{}(e.rational().numerator());
        return h ^ (std::hash<std::int64_t>{}(e.rational().denominator()) << 1);
    }
};
