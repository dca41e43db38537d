#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace deephole {

enum class errc {
    non_prime,
    not_irreducible,
    too_large,
    division_by_zero,
    field_mismatch,
    non_monic_divisor,
    zero_polynomial,
    arity_mismatch,
    index_out_of_range,
    degree_too_high,
    degree_out_of_range,
    too_large_for_brute_force,
    too_many_variables,
    cap_exceeded,
    invalid_dimensions,
    not_a_witness,
    hypothesis_violated,
    insufficient_trace_zero_elements,
    too_large_for_exhaustive,
    invalid_params,
};

constexpr std::string_view to_string(errc code) noexcept {
    switch (code) {
    case errc::non_prime: return "NonPrime";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::too_large: return "TooLarge";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::non_monic_divisor: return "NonMonicDivisor";
    case errc::zero_polynomial: return "ZeroPolynomial";
    case errc::arity_mismatch: return "ArityMismatch";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::degree_too_high: return "DegreeTooHigh";
    case errc::degree_out_of_range: return "DegreeOutOfRange";
    case errc::too_large_for_brute_force: return "TooLargeForBruteForce";
    case errc::too_many_variables: return "TooManyVariables";
    case errc::cap_exceeded: return "CapExceeded";
    case errc::invalid_dimensions: return "InvalidDimensions";
    case errc::not_a_witness: return "NotAWitness";
    case errc::hypothesis_violated: return "HypothesisViolated";
    case errc::insufficient_trace_zero_elements: return "InsufficientTraceZeroElements";
    case errc::too_large_for_exhaustive: return "TooLargeForExhaustive";
    case errc::invalid_params: return "InvalidParams";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace deephole
