#ifndef CHRONON_PRECISION_HPP
#define CHRONON_PRECISION_HPP

// Arbitrary-precision scalars for the templated dispersion and difference-calculus maps.
// Header-only; pulls in Boost.Multiprecision, so include it only where needed.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace chronon {

template <unsigned Digits>
using HighReal = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;

template <unsigned Digits>
using HighComplex = boost::multiprecision::number<
    boost::multiprecision::complex_adaptor<boost::multiprecision::cpp_bin_float<Digits>>>;

using Real50 = HighReal<50>;
using Complex50 = HighComplex<50>;

}  // namespace chronon

#endif  // CHRONON_PRECISION_HPP
