#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ncg {

// odd or out-of-range dimension, or mismatched sizes
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// an x-derivative was requested beyond the jets carried by an input
struct JetDepthError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// a symbol is asked for degrees below what its inputs determine
struct TruncationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotInvertibleError : std::domain_error {
  using std::domain_error::domain_error;
};

// full-line integral of a rational function that does not decay
struct DivergenceError : std::domain_error {
  using std::domain_error::domain_error;
};

// closed form used outside the dimensions where it is stated
struct ValidityError : std::domain_error {
  using std::domain_error::domain_error;
};

class RouteDisagreement : public std::runtime_error {
 public:
  RouteDisagreement(std::complex<double> route_a, std::complex<double> route_b)
      : std::runtime_error("interior density routes disagree: compose=" + fmt(route_a) +
                           " assembly=" + fmt(route_b)),
        route_a_(route_a),
        route_b_(route_b) {}

  std::complex<double> route_a() const { return route_a_; }
  std::complex<double> route_b() const { return route_b_; }

 private:
  static std::string fmt(std::complex<double> z) {
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
  }
  std::complex<double> route_a_;
  std::complex<double> route_b_;
};

}  // namespace ncg
