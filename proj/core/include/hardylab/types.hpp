// core/include/hardylab/types.hpp
//
// Shared value types for the Hardy-space operator lab: disk points,
// coefficient windows, and decay envelopes.
//
// Conventions used throughout the library:
//   * Fourier coefficients  c(n) = (1/2pi) \int f(e^{it}) e^{-int} dt.
//   * Inner products are conjugate-linear in the SECOND slot,
//     <x,y> = sum_n x_n conj(y_n), matching Eigen's x.dot(y) = conj? -- NO:
//     Eigen's a.dot(b) conjugates a, so we always write b.dot(a) or use
//     inner(x,y) below. Rank-one x (x) y is the matrix x * y^H.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hardylab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

constexpr double kPi = 3.14159265358979323846;

// <x,y> conjugate-linear in the second slot.
inline cplx inner(const Vec& x, const Vec& y) { return y.dot(x); }

// ---------------------------------------------------------------- DiskPoint

// A point z = r e^{i theta} strictly inside the unit disk.
struct DiskPoint {
  double r = 0.0;
  double theta = 0.0;

  DiskPoint() = default;
  DiskPoint(double r_, double theta_) : r(r_), theta(theta_) {
    if (!(r >= 0.0 && r < 1.0))
      throw std::invalid_argument("DiskPoint: need 0 <= r < 1, got r=" + std::to_string(r_));
  }
  static DiskPoint from_complex(cplx z) {
    return DiskPoint(std::abs(z), std::arg(z));
  }
  cplx value() const { return std::polar(r, theta); }
  DiskPoint conj() const { return DiskPoint(r, -theta); }
};

// ------------------------------------------------------------- CoeffVector

// Contiguous window of Laurent coefficients: data[i] = c(lo + i).
// Degrees outside [lo, hi) read as zero.
struct CoeffVector {
  long lo = 0;
  Vec data;

  CoeffVector() = default;
  CoeffVector(long lo_, Vec data_) : lo(lo_), data(std::move(data_)) {}

  long hi() const { return lo + static_cast<long>(data.size()); }  // one past the end
  long size() const { return static_cast<long>(data.size()); }

  cplx at(long n) const {
    if (n < lo || n >= hi()) return cplx(0.0, 0.0);
    return data[n - lo];
  }
  double norm() const { return data.norm(); }
  double sup_abs() const {
    double m = 0.0;
    for (long i = 0; i < size(); ++i) m = std::max(m, std::abs(data[i]));
    return m;
  }
};

// ----------------------------------------------------------- DecayEnvelope

// Certified bound on coefficient magnitude: |c(+-n)| <= at(n) for n >= start.
// Three shapes cover everything the lab produces:
//   finite    : identically zero beyond `band` (trig polys, arc intersections)
//   power     : C * n^{-p}            (arc indicators: C = 1/pi, p = 1)
//   geometric : A * rho^n             (Blaschke/Mobius factors)
struct DecayEnvelope {
  enum class Kind { finite, power, geometric };
  Kind kind = Kind::finite;
  double C = 0.0;     // power constant
  double p = 0.0;     // power exponent
  double A = 0.0;     // geometric constant
  double rho = 0.0;   // geometric ratio, in [0,1)
  long band = 0;      // finite: zero for |n| > band

  static DecayEnvelope finite(long band_) {
    DecayEnvelope e;
    e.kind = Kind::finite;
    e.band = band_ < 0 ? 0 : band_;
    return e;
  }
  static DecayEnvelope power(double C_, double p_) {
    DecayEnvelope e;
    e.kind = Kind::power;
    e.C = C_;
    e.p = p_;
    return e;
  }
  static DecayEnvelope geometric(double A_, double rho_) {
    if (!(rho_ >= 0.0 && rho_ < 1.0))
      throw std::invalid_argument("DecayEnvelope: geometric ratio must be in [0,1)");
    DecayEnvelope e;
    e.kind = Kind::geometric;
    e.A = A_;
    e.rho = rho_;
    return e;
  }

  // pointwise bound at |n| = n (n >= 1)
  double at(long n) const {
    switch (kind) {
      case Kind::finite: return 0.0;  // only used for tails beyond the band
      case Kind::power: return C * std::pow(static_cast<double>(n), -p);
      case Kind::geometric: return A * std::pow(rho, static_cast<double>(n));
    }
    return 0.0;
  }

  // true when sum |c(n)| over one side converges (needed for products)
  bool l1_summable() const {
    switch (kind) {
      case Kind::finite: return true;
      case Kind::power: return p > 1.0;
      case Kind::geometric: return true;
    }
    return false;
  }
  // true when sum |c(n)|^2 converges -- the certifiability boundary for
  // operator windows and output tails (power kind: p > 1/2).
  bool l2_summable() const {
    switch (kind) {
      case Kind::finite: return true;
      case Kind::power: return p > 0.5;
      case Kind::geometric: return true;
    }
    return false;
  }

  // one-sided tail bounds: sum over n >= from (from >= 1)
  double tail_l1(long from) const {
    if (from < 1) from = 1;
    switch (kind) {
      case Kind::finite: return 0.0;  // callers must cover [from, band] explicitly
      case Kind::power: {
        if (p <= 1.0) return std::numeric_limits<double>::infinity();
        // sum_{n>=m} n^{-p} <= m^{-p} + m^{1-p}/(p-1)
        double m = static_cast<double>(from);
        return C * (std::pow(m, -p) + std::pow(m, 1.0 - p) / (p - 1.0));
      }
      case Kind::geometric:
        return A * std::pow(rho, static_cast<double>(from)) / (1.0 - rho);
    }
    return 0.0;
  }
  double tail_l2(long from) const {
    if (from < 1) from = 1;
    switch (kind) {
      case Kind::finite: return 0.0;
      case Kind::power: {
        if (p <= 0.5) return std::numeric_limits<double>::infinity();
        double m = static_cast<double>(from);
        // sum n^{-2p} <= m^{-2p} + m^{1-2p}/(2p-1), then sqrt
        double s = std::pow(m, -2.0 * p) + std::pow(m, 1.0 - 2.0 * p) / (2.0 * p - 1.0);
        return C * std::sqrt(s);
      }
      case Kind::geometric: {
        double r2 = rho * rho;
        return A * std::pow(rho, static_cast<double>(from)) / std::sqrt(1.0 - r2);
      }
    }
    return 0.0;
  }
};

}  // namespace hardylab
