#include "minimize.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace speclab::detail {
namespace {

using Objective = std::function<double(const std::vector<double>&)>;

struct Context {
  const Objective* f;
  std::vector<double> buffer;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (size_t i = 0; i < ctx->buffer.size(); ++i) ctx->buffer[i] = gsl_vector_get(v, i);
  return (*ctx->f)(ctx->buffer);
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, const std::vector<double>& step,
                           double size_tol, int max_iter) {
  const size_t n = x0.size();
  Context ctx{&f, std::vector<double>(n)};
  gsl_multimin_function fn{&trampoline, n, &ctx};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (size_t i = 0; i < n; ++i) {
    gsl_vector_set(x, i, x0[i]);
    gsl_vector_set(ss, i, step[i]);
  }
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) break;
  }
  MinimizeResult out;
  out.x.resize(n);
  for (size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
  out.value = s->fval;
  out.iterations = iter;
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(x);
  gsl_vector_free(ss);
  return out;
}

}  // namespace speclab::detail
