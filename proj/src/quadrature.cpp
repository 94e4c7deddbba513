#include "heights/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

namespace heights::quad {

namespace {

constexpr std::size_t kLimit = 2000;

struct WorkspaceDeleter {
  void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

double trampoline(double x, void* params) { return (*static_cast<const std::function<double(double)>*>(params))(x); }

void quiet_gsl() {
  // GSL aborts on errors by default; status codes are checked instead.
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

Result<double> integrate(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol) {
  quiet_gsl();
  Result<double> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (a > b) {
    out = integrate(f, b, a, abs_tol, rel_tol);
    out.value = -out.value;
    return out;
  }
  std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(gsl_integration_workspace_alloc(kLimit));
  gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  const bool lo_inf = std::isinf(a), hi_inf = std::isinf(b);
  int status;
  if (lo_inf && hi_inf) {
    status = gsl_integration_qagi(&fn, abs_tol, rel_tol, kLimit, ws.get(), &out.value, &out.error);
  } else if (hi_inf) {
    status = gsl_integration_qagiu(&fn, a, abs_tol, rel_tol, kLimit, ws.get(), &out.value, &out.error);
  } else if (lo_inf) {
    status = gsl_integration_qagil(&fn, b, abs_tol, rel_tol, kLimit, ws.get(), &out.value, &out.error);
  } else {
    status = gsl_integration_qags(&fn, a, b, abs_tol, rel_tol, kLimit, ws.get(), &out.value, &out.error);
  }
  out.converged = status == GSL_SUCCESS;
  return out;
}

Result<std::complex<double>> integrate_complex(const std::function<std::complex<double>(double)>& f, double a,
                                               double b, double abs_tol, double rel_tol) {
  auto re = integrate([&](double x) { return f(x).real(); }, a, b, abs_tol / 2, rel_tol);
  auto im = integrate([&](double x) { return f(x).imag(); }, a, b, abs_tol / 2, rel_tol);
  return {{re.value, im.value}, std::hypot(re.error, im.error), re.converged && im.converged};
}

Result<double> integrate_2d(const std::function<double(double, double)>& f, double ax, double bx, double ay,
                            double by, double abs_tol, double rel_tol) {
  bool ok = true;
  const double width = std::isinf(bx - ax) ? 1.0 : std::max(1.0, bx - ax);
  auto outer = [&](double x) {
    auto r = integrate([&](double y) { return f(x, y); }, ay, by, 0.1 * abs_tol / width, 0.1 * rel_tol);
    ok = ok && r.converged;
    return r.value;
  };
  auto r = integrate(outer, ax, bx, abs_tol, rel_tol);
  r.converged = r.converged && ok;
  return r;
}

Result<std::complex<double>> integrate_2d_complex(const std::function<std::complex<double>(double, double)>& f,
                                                  double ax, double bx, double ay, double by, double abs_tol, double rel_tol) {
  auto re = integrate_2d([&](double x, double y) { return f(x, y).real(); }, ax, bx, ay, by, abs_tol / 2, rel_tol);
  auto im = integrate_2d([&](double x, double y) { return f(x, y).imag(); }, ax, bx, ay, by, abs_tol / 2, rel_tol);
  return {{re.value, im.value}, std::hypot(re.error, im.error), re.converged && im.converged};
}

}  // namespace heights::quad
