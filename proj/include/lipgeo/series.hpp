#pragma once

#include "lipgeo/expq.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lipgeo {

using Coeff = boost::multiprecision::cpp_rational;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::ostringstream os;
        if (line) os << "line " << line << ", ";
        os << "col " << column << ": " << what;
        return os.str();
    }
    std::size_t line_;
    std::size_t column_;
};

/// Raised when a comparison cannot be decided below the truncation order.
class Indeterminate : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Term {
    ExpQ exponent;
    Coeff coeff;
    friend bool operator==(const Term&, const Term&) = default;
};

/// Finite generalized power series in t with rational exponents, known up to
/// O(t^truncation). truncation == INF means the series is exact.
class Series {
public:
    Series() = default;

    /// Terms may be unsorted and contain duplicates; they are collected.
    explicit Series(std::vector<Term> terms, ExpQ truncation = ExpQ::inf())
        : truncation_(truncation) {
        std::map<Rational, Coeff> acc;
        for (auto& t : terms) {
            if (t.exponent.is_inf()) throw std::invalid_argument("series term at infinite exponent");
            acc[t.exponent.rational()] += t.coeff;
        }
        for (auto& [e, c] : acc) {
            if (c == 0) continue;
            if (!(ExpQ(e) < truncation_)) continue;
            terms_.push_back({ExpQ(e), c});
        }
    }

    static Series monomial(Coeff c, ExpQ e) { return Series({{e, std::move(c)}}); }

    const std::vector<Term>& terms() const { return terms_; }
    ExpQ truncation() const { return truncation_; }
    bool exact() const { return truncation_.is_inf(); }
    bool is_zero() const { return terms_.empty(); }

    /// Leading exponent; INF for an exact zero series. Throws Indeterminate when
    /// nothing is known below the truncation.
    ExpQ order() const {
        if (!terms_.empty()) return terms_.front().exponent;
        if (exact()) return ExpQ::inf();
        throw Indeterminate("series vanishes up to O(t^" + truncation_.str() + ")");
    }

    Coeff coefficient(const ExpQ& e) const {
        for (auto& t : terms_)
            if (t.exponent == e) return t.coeff;
        return 0;
    }

    friend Series operator+(const Series& a, const Series& b) {
        std::vector<Term> all = a.terms_;
        all.insert(all.end(), b.terms_.begin(), b.terms_.end());
        return Series(std::move(all), min(a.truncation_, b.truncation_));
    }
    friend Series operator-(const Series& a) {
        std::vector<Term> neg = a.terms_;
        for (auto& t : neg) t.coeff = -t.coeff;
        return Series(std::move(neg), a.truncation_);
    }
    friend Series operator-(const Series& a, const Series& b) { return a + (-b); }
    friend Series operator*(const Coeff& c, const Series& a) {
        if (c == 0) return Series({}, a.truncation_);
        std::vector<Term> out = a.terms_;
        for (auto& t : out) t.coeff *= c;
        return Series(std::move(out), a.truncation_);
    }

    friend bool operator==(const Series&, const Series&) = default;

    long double evaluate(long double t) const {
        long double sum = 0;
        for (auto& term : terms_) {
            long double c = static_cast<long double>(term.coeff);
            sum += c * std::pow(t, static_cast<long double>(term.exponent.to_double()));
        }
        return sum;
    }

    std::string str() const;

private:
    std::vector<Term> terms_;
    ExpQ truncation_ = ExpQ::inf();
};

inline std::ostream& operator<<(std::ostream& os, const Series& s) { return os << s.str(); }

namespace detail {

inline std::string coeff_str(const Coeff& c) {
    auto n = boost::multiprecision::numerator(c);
    auto d = boost::multiprecision::denominator(c);
    if (d == 1) return n.str();
    return n.str() + "/" + d.str();
}

inline std::string power_str(const ExpQ& e) {
    if (e == ExpQ(1)) return "t";
    const auto& r = e.rational();
    if (r.denominator() == 1 && r.numerator() > 0) return "t^" + std::to_string(r.numerator());
    return "t^(" + std::to_string(r.numerator()) + "/" + std::to_string(r.denominator()) + ")";
}

}  // namespace detail

inline std::string Series::str() const {
    std::string out;
    bool first = true;
    for (auto& t : terms_) {
        Coeff mag = t.coeff < 0 ? Coeff(-t.coeff) : t.coeff;
        bool neg = t.coeff < 0;
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        if (t.exponent == ExpQ(0)) {
            out += detail::coeff_str(mag);
        } else if (mag == 1) {
            out += detail::power_str(t.exponent);
        } else {
            out += detail::coeff_str(mag) + "*" + detail::power_str(t.exponent);
        }
    }
    if (!exact()) {
        out += first ? "" : " + ";
        out += "O(" + detail::power_str(truncation_) + ")";
        first = false;
    }
    if (first) out = "0";
    return out;
}

namespace detail {

class SeriesParser {
public:
    SeriesParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

    Series parse() {
        std::vector<Term> terms;
        ExpQ trunc = ExpQ::inf();
        skip();
        bool first = true;
        while (true) {
            skip();
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip();
            } else if (!first) {
                fail("expected '+' or '-'");
            }
            first = false;
            if (peek() == 'O') {
                ++pos_;
                expect('(');
                skip();
                expect('t');
                ExpQ e = exponent_suffix();
                skip();
                expect(')');
                trunc = min(trunc, e);
            } else {
                terms.push_back(term(sign));
            }
            skip();
            if (pos_ >= s_.size()) break;
        }
        return Series(std::move(terms), trunc);
    }

private:
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, pos_ + 1); }
    void expect(char c) {
        skip();
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::int64_t integer() {
        skip();
        std::size_t start = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        auto v = parse_int(s_.substr(start, pos_ - start));
        if (!v) {
            pos_ = start;
            fail("expected integer");
        }
        return *v;
    }

    Coeff coefficient() {
        std::size_t start = pos_;
        while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) fail("expected coefficient");
        Coeff value(boost::multiprecision::cpp_int(std::string(s_.substr(start, pos_ - start))));
        if (peek() == '.') {
            ++pos_;
            std::size_t fs = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            if (fs == pos_) fail("expected digits after '.'");
            boost::multiprecision::cpp_int frac(std::string(s_.substr(fs, pos_ - fs)));
            boost::multiprecision::cpp_int scale = boost::multiprecision::pow(
                boost::multiprecision::cpp_int(10), static_cast<unsigned>(pos_ - fs));
            value += Coeff(frac, scale);
        } else if (peek() == '/') {
            ++pos_;
            std::size_t ds = pos_;
            while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            if (ds == pos_) fail("expected denominator");
            boost::multiprecision::cpp_int den(std::string(s_.substr(ds, pos_ - ds)));
            if (den == 0) fail("zero denominator");
            value /= Coeff(den);
        }
        return value;
    }

    ExpQ exponent_suffix() {
        skip();
        if (peek() != '^') return ExpQ(1);
        ++pos_;
        skip();
        if (peek() == '(') {
            ++pos_;
            std::int64_t n = integer();
            std::int64_t d = 1;
            skip();
            if (peek() == '/') {
                ++pos_;
                d = integer();
                if (d == 0) fail("zero denominator in exponent");
            } else if (peek() == '.') {
                fail("non-rational exponent");
            }
            expect(')');
            return ExpQ(n, d);
        }
        std::size_t start = pos_;
        std::int64_t n = integer();
        if (peek() == '.' || peek() == '/') {
            pos_ = start;
            fail("non-rational exponent; write t^(p/q)");
        }
        return ExpQ(n);
    }

    Term term(int sign) {
        skip();
        Coeff c = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            c = coefficient();
            have_coeff = true;
            skip();
            if (peek() != '*') return {ExpQ(0), sign * c};
            ++pos_;
            skip();
        }
        if (peek() != 't') fail(have_coeff ? "expected 't' after '*'" : "expected term");
        ++pos_;
        ExpQ e = exponent_suffix();
        return {e, sign * c};
    }

    std::string_view s_;
    std::size_t line_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: term (('+'|'-') term)*, term := [coef '*'] t[^int | ^(int/int)] | coef,
/// plus an optional O(t^q) term that sets the truncation order.
inline Series parse_series(std::string_view text, std::size_t line = 0) {
    return detail::SeriesParser(text, line).parse();
}

}  // namespace lipgeo
