#ifndef BOSEGAS_GRID_HPP
#define BOSEGAS_GRID_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace bosegas {

// Uniform lattice in 1 to 3 dimensions, isotropic spacing, row-major storage
// (last axis fastest). Unused trailing axes have extent 1. All algorithms in
// this library treat the box as a torus when periodic is set; otherwise field
// values are assumed to vanish outside.
struct Grid {
    // Hard ceiling on lattice sites (1 GiB of doubles); guards config typos.
    static constexpr std::size_t kMaxPoints = std::size_t{1} << 27;

    int dimension = 1;
    std::array<int, 3> shape = {1, 1, 1};
    double spacing = 1.0;
    bool periodic = true;

    static Grid line(int n, double h, bool periodic = true);
    static Grid plane(int nx, int ny, double h, bool periodic = true);
    static Grid box(int nx, int ny, int nz, double h, bool periodic = true);

    std::size_t size() const {
        return static_cast<std::size_t>(shape[0]) * static_cast<std::size_t>(shape[1]) *
               static_cast<std::size_t>(shape[2]);
    }
    double cell_volume() const;                  // h^d
    double volume() const;                       // size * h^d
    double extent(int axis) const;               // shape[axis] * h

    std::size_t index(int i, int j = 0, int k = 0) const {
        return (static_cast<std::size_t>(i) * shape[1] + static_cast<std::size_t>(j)) * shape[2] +
               static_cast<std::size_t>(k);
    }
    std::array<int, 3> unindex(std::size_t flat) const {
        const int k = static_cast<int>(flat % shape[2]);
        const std::size_t rest = flat / shape[2];
        return {static_cast<int>(rest / shape[1]), static_cast<int>(rest % shape[1]), k};
    }
    int wrap(int c, int axis) const {
        const int n = shape[axis];
        c %= n;
        return c < 0 ? c + n : c;
    }
    // Minimum-image signed lattice offset along one axis.
    int min_image(int dc, int axis) const;
    // Position of a site along one axis (cell centers at multiples of h).
    double position(int c, int axis) const { return c * spacing + 0.5 * spacing - 0.5 * extent(axis); }

    void validate() const;
    bool same_shape(const Grid& other) const;
};

// Scalar field on a grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::size_t size() const { return values.size(); }

    double sum() const;
    double mean() const;
    double min() const;
    double max() const;
    // Integral of the field over the box: sum * h^d.
    double integral() const;
    void check_consistent() const;  // throws ShapeMismatch
};

} // namespace bosegas

#endif
