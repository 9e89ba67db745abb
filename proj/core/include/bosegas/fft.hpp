#ifndef BOSEGAS_FFT_HPP
#define BOSEGAS_FFT_HPP

#include <complex>
#include <vector>

#include "bosegas/grid.hpp"

namespace bosegas {

// Complex DFT for one grid shape. Plans are created once per object (plan
// creation is serialized internally; execution is thread-safe, so workers
// hold their own Fft). Transforms are unnormalized: backward(forward(x))
// returns x scaled by the mode count.
class Fft {
public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    void forward(std::vector<std::complex<double>>& data) const;
    void backward(std::vector<std::complex<double>>& data) const;

    const Grid& grid() const { return grid_; }

    // Wrapped wavenumber of mode k along one axis: 2 pi k' / (N h) with
    // k' in (-N/2, N/2].
    double wavenumber(int mode, int axis) const;
    // |q| of a flat mode index.
    double wavevector_norm(std::size_t flat) const;

private:
    Grid grid_;
    void* plan_forward_ = nullptr;
    void* plan_backward_ = nullptr;
};

} // namespace bosegas

#endif
