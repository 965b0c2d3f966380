#ifndef CAUSALHIER_RATIONAL_HPP
#define CAUSALHIER_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace causalhier {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always in lowest terms with positive denominator.
/// Every probability in the library is one of these; no floating point is
/// used on any computation path that feeds a decision or an output file.
using Rational = boost::multiprecision::cpp_rational;

enum class ErrCode {
    Input = 2,         // malformed input / validation failure
    Infeasible = 3,    // constraint system has no solution
    Precondition = 4,  // operation precondition not met (e.g. not Y-good)
};

struct Error : std::runtime_error {
    ErrCode code;
    Error(ErrCode c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw Error(ErrCode::Input, "rational with zero denominator");
    return Rational(num, den);
}

/// Parses "a/b", a bare integer "a", or a plain decimal like "0.05".
inline Rational parse_rational(const std::string& s) {
    if (s.empty()) throw Error(ErrCode::Input, "empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            return make_rational(num, den);
        }
        auto dot = s.find('.');
        if (dot != std::string::npos) {
            std::string head = s.substr(0, dot), tail = s.substr(dot + 1);
            if (tail.find_first_not_of("0123456789") != std::string::npos)
                throw Error(ErrCode::Input, "bad decimal literal: " + s);
            bool neg = !head.empty() && head[0] == '-';
            BigInt ip = head.empty() || head == "-" ? BigInt(0) : BigInt(head);
            BigInt den = 1;
            for (std::size_t i = 0; i < tail.size(); ++i) den *= 10;
            BigInt frac = tail.empty() ? BigInt(0) : BigInt(tail);
            BigInt num = abs(ip) * den + frac;
            if (neg || ip < 0) num = -num;
            return make_rational(num, den);
        }
        return Rational(BigInt(s));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(ErrCode::Input, "bad rational literal: " + s);
    }
}

/// Canonical text form: "a/b", or just "a" when the denominator is 1.
inline std::string format_rational(const Rational& r) {
    std::string n = numerator(r).str();
    if (denominator(r) == 1) return n;
    return n + "/" + denominator(r).str();
}

}  // namespace causalhier

#endif
