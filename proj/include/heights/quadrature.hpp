#pragma once

#include <complex>
#include <functional>

// Thin layer over GSL's QUADPACK routines (QAGS with extrapolation on finite
// intervals, QAGI/QAGIU/QAGIL on infinite ones).
namespace heights::quad {

template <class T>
struct Result {
  T value{};
  double error = 0;
  bool converged = false;
};

// Either bound may be +-infinity.
Result<double> integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                         double rel_tol = 0.0);
// Real and imaginary parts are integrated separately.
Result<std::complex<double>> integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                                               double b, double abs_tol, double rel_tol = 0.0);

// Iterated integral of f(x, y) over [ax, bx] x [ay, by].
Result<double> integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                            double by, double abs_tol, double rel_tol = 0.0);
Result<std::complex<double>> integrate_2d_complex(const std::function<std::complex<double>(double, double)>& f,
                                                  double ax, double bx, double ay, double by, double abs_tol, double rel_tol = 0.0);

}  // namespace heights::quad
