#pragma once

#include <string>
#include <vector>

#include "sandpile/bigint.hpp"
#include "sandpile/error.hpp"

namespace sandpile {

/// Dense univariate polynomial with exact nonnegative integer coefficients;
/// index = degree, trailing zeros trimmed.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) {
        for (const BigInt& c : coeffs_)
            if (c < 0) fail(Errc::BadInput, "negative polynomial coefficient");
        trim();
    }

    static Polynomial one() { return Polynomial({1}); }

    /// 1 + x + ... + x^(k-1).
    static Polynomial geometric(int k) {
        if (k < 1) fail(Errc::BadInput, "geometric polynomial needs k >= 1");
        return Polynomial(std::vector<BigInt>(k, 1));
    }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for the zero polynomial

    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    BigInt coeff(int i) const {
        return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : BigInt(0);
    }

    /// Multiplication by x.
    Polynomial shifted() const {
        if (is_zero()) return {};
        Polynomial out;
        out.coeffs_.reserve(coeffs_.size() + 1);
        out.coeffs_.push_back(0);
        out.coeffs_.insert(out.coeffs_.end(), coeffs_.begin(), coeffs_.end());
        return out;
    }

    void bump(int exponent) {  // += x^exponent
        if (static_cast<int>(coeffs_.size()) <= exponent) coeffs_.resize(exponent + 1, 0);
        coeffs_[exponent] += 1;
    }

    BigInt eval(const BigInt& at) const {
        BigInt acc = 0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * at + *it;
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        Polynomial out;
        out.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) out.coeffs_[i] += a.coeffs_[i];
        for (std::size_t i = 0; i < b.coeffs_.size(); ++i) out.coeffs_[i] += b.coeffs_[i];
        return out;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        Polynomial out;
        out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return out;
    }

    bool operator==(const Polynomial& other) const = default;

    /// Ascending human-readable form, e.g. "1 + 3x" or "x + 2x^2".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (coeffs_[i] == 0) continue;
            if (!out.empty()) out += " + ";
            const bool unit = coeffs_[i] == 1;
            if (i == 0) {
                out += coeffs_[i].str();
            } else {
                if (!unit) out += coeffs_[i].str();
                out += "x";
                if (i > 1) out += "^" + std::to_string(i);
            }
        }
        return out.empty() ? "0" : out;
    }

private:
    std::vector<BigInt> coeffs_;

    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
};

}  // namespace sandpile
