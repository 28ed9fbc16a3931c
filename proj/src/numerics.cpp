#include "sphericity/numerics.hpp"

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <memory>

namespace sphericity {

Extremum golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                            double tol, int max_iter) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    // The endpoints are candidates too: the bracket may have collapsed onto one.
    Extremum best{c, fc};
    if (fd < best.value) best = {d, fd};
    for (double x : {lo, hi}) {
        const double fx = f(x);
        if (fx < best.value) best = {x, fx};
    }
    return best;
}

Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                            double tol, int max_iter) {
    Extremum e = golden_section_min([&](double x) { return -f(x); }, lo, hi, tol, max_iter);
    return {e.x, -e.value};
}

namespace {

struct GslFunction {
    const std::function<double(const Eigen::Vector2d&)>* f;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
    auto* ctx = static_cast<GslFunction*>(params);
    const Eigen::Vector2d x(gsl_vector_get(v, 0), gsl_vector_get(v, 1));
    const double y = (*ctx->f)(x);
    return std::isfinite(y) ? y : GSL_POSINF;
}

}  // namespace

SimplexResult nelder_mead_min(const std::function<double(const Eigen::Vector2d&)>& f,
                              const Eigen::Vector2d& start, double step, double size_tol,
                              int max_iter) {
    gsl_set_error_handler_off();
    GslFunction ctx{&f};
    gsl_multimin_function fn{&gsl_trampoline, 2, &ctx};

    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(2), gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(2), gsl_vector_free);
    gsl_vector_set(x.get(), 0, start[0]);
    gsl_vector_set(x.get(), 1, start[1]);
    gsl_vector_set_all(ss.get(), step);

    std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2),
        gsl_multimin_fminimizer_free);
    gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(s.get());
        if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) break;
    }
    const gsl_vector* best = gsl_multimin_fminimizer_x(s.get());
    return {Eigen::Vector2d(gsl_vector_get(best, 0), gsl_vector_get(best, 1)),
            gsl_multimin_fminimizer_minimum(s.get()), iter};
}

std::string format_number(double v, int digits) { return fmt::format("{:.{}g}", v, digits); }

}  // namespace sphericity
