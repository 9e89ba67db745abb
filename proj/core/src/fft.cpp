#include "bosegas/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "bosegas/constants.hpp"
#include "bosegas/errors.hpp"

namespace bosegas {

namespace {
// FFTW planning mutates global state; execution does not.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft::Fft(const Grid& grid) : grid_(grid) {
    grid_.validate();
    std::vector<std::complex<double>> scratch(grid_.size());
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    int n[3] = {grid_.shape[0], grid_.shape[1], grid_.shape[2]};
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_forward_ = fftw_plan_dft(grid_.dimension, n, p, p, FFTW_FORWARD, flags);
    plan_backward_ = fftw_plan_dft(grid_.dimension, n, p, p, FFTW_BACKWARD, flags);
    if (!plan_forward_ || !plan_backward_)
        throw NumericalError("Fft: planner failed for this shape");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (plan_forward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    if (plan_backward_) fftw_destroy_plan(static_cast<fftw_plan>(plan_backward_));
}

void Fft::forward(std::vector<std::complex<double>>& data) const {
    if (data.size() != grid_.size()) throw ShapeMismatch("Fft::forward: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_forward_), p, p);
}

void Fft::backward(std::vector<std::complex<double>>& data) const {
    if (data.size() != grid_.size()) throw ShapeMismatch("Fft::backward: size mismatch");
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(plan_backward_), p, p);
}

double Fft::wavenumber(int mode, int axis) const {
    const int n = grid_.shape[axis];
    int k = mode;
    if (k > n / 2) k -= n;
    return 2.0 * pi * k / (n * grid_.spacing);
}

double Fft::wavevector_norm(std::size_t flat) const {
    const auto c = grid_.unindex(flat);
    double s = 0.0;
    for (int a = 0; a < grid_.dimension; ++a) {
        const double q = wavenumber(c[a], a);
        s += q * q;
    }
    return std::sqrt(s);
}

} // namespace bosegas
