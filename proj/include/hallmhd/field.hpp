#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hallmhd/grid.hpp"

namespace hallmhd {

/// One real scalar on a Grid. The spectral representation is authoritative;
/// physical values are an optional cache filled by to_physical().
class Field {
public:
    explicit Field(GridPtr grid);
    static Field from_phys(GridPtr grid, std::vector<double> phys);
    static Field from_spec(GridPtr grid, std::vector<std::complex<double>> spec);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    std::span<const std::complex<double>> spec() const { return spec_; }
    /// Mutable access; invalidates the physical cache.
    std::span<std::complex<double>> spec_mut() {
        phys_.reset();
        return spec_;
    }

    bool has_phys() const { return phys_.has_value(); }
    const std::vector<double>& phys() const; // requires cache; see to_physical

    Field& operator+=(const Field& other);
    Field& operator-=(const Field& other);
    Field& operator*=(double s);

    friend Field to_physical(const Field& f);
    friend Field to_spectral(const Field& f);
    /// Physical values of f: a reference to its cache when present, otherwise
    /// computed into `scratch`.
    friend const std::vector<double>& phys_ref(const Field& f, std::vector<double>& scratch);

private:
    GridPtr grid_;
    std::vector<std::complex<double>> spec_;
    std::optional<std::vector<double>> phys_;
};

Field to_physical(const Field& f);
Field to_spectral(const Field& f);
const std::vector<double>& phys_ref(const Field& f, std::vector<double>& scratch);

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(Field a, double s);
Field operator*(double s, Field a);

/// Throws ConfigError unless both fields live on the same grid object.
void require_same_grid(const Field& a, const Field& b, const char* op);

} // namespace hallmhd
