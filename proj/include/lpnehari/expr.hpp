#pragma once

// Scalar trigonometric-polynomial literals for command lines and recipes:
// "1+0.5z", "z^2-0.25", "2z^-1+iz", "0.3 - 0.1i z^3".  A term is a product
// of numbers, the imaginary unit `i`, and powers of `z` (signed exponents);
// juxtaposition multiplies.  The Unicode minus sign is accepted.

#include <cctype>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "lpnehari/symbol.hpp"

namespace lpnehari {

namespace detail {

class PolyParser {
public:
    explicit PolyParser(std::string text) : s_(normalize(std::move(text))) {}

    std::map<int, Complex> parse() {
        std::map<int, Complex> acc;
        skip_ws();
        if (eof()) fail("empty expression");
        bool first = true;
        while (!eof()) {
            double sign = 1.0;
            if (peek() == '+' || peek() == '-') {
                sign = (get() == '-') ? -1.0 : 1.0;
                skip_ws();
            } else if (!first) {
                fail("expected '+' or '-' between terms");
            }
            auto [coeff, power] = term();
            acc[power] += sign * coeff;
            skip_ws();
            first = false;
        }
        return acc;
    }

private:
    static std::string normalize(std::string t) {
        // U+2212 (minus sign) -> ASCII hyphen.
        std::string out;
        out.reserve(t.size());
        for (std::size_t i = 0; i < t.size();) {
            if (i + 2 < t.size() && static_cast<unsigned char>(t[i]) == 0xE2 &&
                static_cast<unsigned char>(t[i + 1]) == 0x88 && static_cast<unsigned char>(t[i + 2]) == 0x92) {
                out.push_back('-');
                i += 3;
            } else {
                out.push_back(t[i++]);
            }
        }
        return out;
    }

    std::pair<Complex, int> term() {
        Complex coeff(1.0, 0.0);
        int power = 0;
        bool any = false;
        while (true) {
            skip_ws();
            if (!eof() && peek() == '*') {
                if (!any) fail("'*' needs a left factor");
                get();
                skip_ws();
            }
            if (eof()) break;
            const char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                coeff *= number();
            } else if (c == 'i' || c == 'I') {
                get();
                coeff *= Complex(0.0, 1.0);
            } else if (c == 'z' || c == 'Z') {
                get();
                int e = 1;
                if (!eof() && peek() == '^') {
                    get();
                    e = integer();
                }
                power += e;
            } else {
                break;
            }
            any = true;
        }
        if (!any) fail("expected a number, 'i', or 'z'");
        return {coeff, power};
    }

    double number() {
        const std::size_t start = pos_;
        while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) get();
        if (!eof() && (peek() == 'e' || peek() == 'E')) {
            const std::size_t mark = pos_;
            get();
            if (!eof() && (peek() == '+' || peek() == '-')) get();
            if (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
                while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) get();
            } else {
                pos_ = mark;  // the 'e' was not an exponent
            }
        }
        try {
            std::size_t used = 0;
            const double v = std::stod(s_.substr(start, pos_ - start), &used);
            if (used != pos_ - start) fail("malformed number");
            return v;
        } catch (const std::logic_error&) {
            fail("malformed number");
        }
        return 0.0;  // unreachable
    }

    int integer() {
        int sign = 1;
        if (!eof() && (peek() == '+' || peek() == '-')) sign = (get() == '-') ? -1 : 1;
        if (eof() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer exponent");
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (get() - '0');
            if (v > 1 << 20) fail("exponent out of range");
        }
        return sign * static_cast<int>(v);
    }

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char get() { return s_[pos_++]; }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(pos_) + ": " + why +
                                    " in \"" + s_ + "\"");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a scalar trigonometric-polynomial literal into a 1 x 1 symbol.
inline TrigSymbol parse_scalar_poly(const std::string& text) {
    detail::PolyParser p(text);
    TrigSymbol out(1, 1);
    for (const auto& [k, c] : p.parse()) out.set_coeff(k, (CMat(1, 1) << c).finished());
    return out.trimmed(0.0);
}

}  // namespace lpnehari
