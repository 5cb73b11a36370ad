#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace lienard::detail {

template <std::size_t N>
using Vec = std::array<double, N>;

/// Dormand-Prince 5(4) embedded pair with FSAL, PI step-size control and
/// cubic-Hermite dense output.  The controller depends only on the supplied
/// tolerances and the integrated values, so step sequences are reproducible
/// bit-for-bit across runs and thread counts.
template <std::size_t N, class RHS>
class Dopri5 {
 public:
  enum class StepStatus { Accepted, Underflow };

  Dopri5(RHS rhs, double rel_tol, double abs_tol)
      : rhs_(rhs), rtol_(rel_tol), atol_(abs_tol) {}

  void init(double t0, const Vec<N>& y0, double h0) {
    t_ = t0;
    y_ = y0;
    rhs_(y_, f_);
    h_ = h0;
    err_old_ = 1.0e-4;
    reject_ = false;
    t_prev_ = t0;
    h_prev_ = 0.0;
    y_prev_ = y0;
    f_prev_ = f_;
    f_end_prev_ = f_;
  }

  double t() const { return t_; }
  const Vec<N>& y() const { return y_; }
  const Vec<N>& f() const { return f_; }
  double t_prev() const { return t_prev_; }
  double h_prev() const { return h_prev_; }
  const Vec<N>& y_prev() const { return y_prev_; }
  const Vec<N>& f_prev() const { return f_prev_; }
  double suggested_step() const { return h_; }

  /// Attempt steps until one is accepted; the step never exceeds h_limit.
  StepStatus step(double h_limit) {
    double h = std::min(h_, h_limit);
    for (int attempt = 0; attempt < 128; ++attempt) {
      if (!(h > min_step())) return StepStatus::Underflow;
      const double err = try_step(h);
      const double expo = 0.2 - 0.75 * kBeta;
      const double fac11 = std::pow(std::max(err, 1e-16), expo);
      if (err <= 1.0) {
        // PI controller (Hairer DOPRI5): hnew = h / fac.
        double fac = fac11 / std::pow(err_old_, kBeta);
        fac = std::max(1.0 / kFacMax, std::min(1.0 / kFacMin, fac / kSafety));
        double hnew = h / fac;
        if (reject_) hnew = std::min(hnew, h);
        commit(h);
        h_ = hnew;
        err_old_ = std::max(err, 1.0e-4);
        reject_ = false;
        return StepStatus::Accepted;
      }
      reject_ = true;
      h = h / std::min(1.0 / kFacMin, fac11 / kSafety);
    }
    return StepStatus::Underflow;
  }

  /// Single step of exactly hstep from the current point, no error control.
  /// Used to land on refined event times with full method accuracy.
  void force_step(double hstep) {
    try_step(hstep);
    commit(hstep);
  }

  /// Rewind to the left end of the last accepted step.
  void rewind() {
    t_ = t_prev_;
    y_ = y_prev_;
    f_ = f_prev_;
    h_prev_ = 0.0;
  }

  /// Cubic Hermite interpolant over the last accepted step, theta in [0,1].
  Vec<N> dense(double theta) const {
    Vec<N> u;
    const double h = h_prev_;
    for (std::size_t i = 0; i < N; ++i) {
      const double d = y_[i] - y_prev_[i];
      const double q = (1.0 - 2.0 * theta) * d +
                       (theta - 1.0) * h * f_prev_[i] +
                       theta * h * f_end_prev_[i];
      u[i] = y_prev_[i] + theta * d + theta * (theta - 1.0) * q;
    }
    return u;
  }

  /// Time derivative of the interpolant at theta.
  Vec<N> dense_deriv(double theta) const {
    Vec<N> du;
    const double h = h_prev_;
    for (std::size_t i = 0; i < N; ++i) {
      const double d = y_[i] - y_prev_[i];
      const double q = (1.0 - 2.0 * theta) * d +
                       (theta - 1.0) * h * f_prev_[i] +
                       theta * h * f_end_prev_[i];
      const double dq = -2.0 * d + h * (f_prev_[i] + f_end_prev_[i]);
      du[i] = (d + (2.0 * theta - 1.0) * q + theta * (theta - 1.0) * dq) / h;
    }
    return du;
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kFacMin = 0.2;
  static constexpr double kFacMax = 10.0;
  static constexpr double kBeta = 0.04;

  double min_step() const { return 1e-14 * std::max(1.0, std::abs(t_)); }

  // Stage evaluation; returns the scaled error norm.  On return k-arrays and
  // y_stage_ hold the candidate step data for commit().
  double try_step(double h) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                     a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                     a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                     a75 = -2187.0 / 6784, a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    Vec<N> tmp;
    k1_ = f_;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y_[i] + h * a21 * k1_[i];
    rhs_(tmp, k2_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    rhs_(tmp, k3_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    rhs_(tmp, k4_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] +
               h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    rhs_(tmp, k5_);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y_[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] +
                            a64 * k4_[i] + a65 * k5_[i]);
    rhs_(tmp, k6_);
    for (std::size_t i = 0; i < N; ++i)
      y_stage_[i] = y_[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] +
                                 a75 * k5_[i] + a76 * k6_[i]);
    rhs_(y_stage_, k7_);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] +
                             e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sc =
          atol_ + rtol_ * std::max(std::abs(y_[i]), std::abs(y_stage_[i]));
      const double r = ei / sc;
      err += r * r;
    }
    return std::sqrt(err / static_cast<double>(N));
  }

  void commit(double h) {
    t_prev_ = t_;
    y_prev_ = y_;
    f_prev_ = k1_;
    f_end_prev_ = k7_;
    h_prev_ = h;
    t_ += h;
    y_ = y_stage_;
    f_ = k7_;  // FSAL
  }

  RHS rhs_;
  double rtol_, atol_;
  double t_ = 0.0, h_ = 1e-4;
  Vec<N> y_{}, f_{};
  double t_prev_ = 0.0, h_prev_ = 0.0;
  Vec<N> y_prev_{}, f_prev_{}, f_end_prev_{};
  Vec<N> k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{}, y_stage_{};
  double err_old_ = 1e-4;
  bool reject_ = false;
};

}  // namespace lienard::detail
