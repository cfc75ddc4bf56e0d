#include "hallmhd/field.hpp"

#include "hallmhd/errors.hpp"

namespace hallmhd {

Field::Field(GridPtr grid) : grid_(std::move(grid)), spec_(grid_->spec_size()) {}

Field Field::from_phys(GridPtr grid, std::vector<double> phys) {
    if (phys.size() != grid->phys_size())
        throw ConfigError("field physical data size mismatch with grid");
    Field f(grid);
    grid->forward(phys.data(), f.spec_.data());
    f.phys_ = std::move(phys);
    return f;
}

Field Field::from_spec(GridPtr grid, std::vector<std::complex<double>> spec) {
    if (spec.size() != grid->spec_size())
        throw ConfigError("field spectral data size mismatch with grid");
    Field f(grid);
    f.spec_ = std::move(spec);
    return f;
}

const std::vector<double>& Field::phys() const {
    if (!phys_) throw PreconditionError("physical cache absent; use to_physical first");
    return *phys_;
}

Field& Field::operator+=(const Field& other) {
    require_same_grid(*this, other, "field add");
    phys_.reset();
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] += other.spec_[i];
    return *this;
}

Field& Field::operator-=(const Field& other) {
    require_same_grid(*this, other, "field subtract");
    phys_.reset();
    for (std::size_t i = 0; i < spec_.size(); ++i) spec_[i] -= other.spec_[i];
    return *this;
}

Field& Field::operator*=(double s) {
    phys_.reset();
    for (auto& c : spec_) c *= s;
    return *this;
}

Field to_physical(const Field& f) {
    Field out = f;
    if (!out.phys_) {
        std::vector<double> p(f.grid().phys_size());
        f.grid().inverse(f.spec_.data(), p.data());
        out.phys_ = std::move(p);
    }
    return out;
}

Field to_spectral(const Field& f) {
    Field out = f;
    out.phys_.reset();
    return out;
}

const std::vector<double>& phys_ref(const Field& f, std::vector<double>& scratch) {
    if (f.phys_) return *f.phys_;
    scratch.resize(f.grid().phys_size());
    f.grid().inverse(f.spec_.data(), scratch.data());
    return scratch;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(Field a, double s) { return a *= s; }
Field operator*(double s, Field a) { return a *= s; }

void require_same_grid(const Field& a, const Field& b, const char* op) {
    if (&a.grid() != &b.grid())
        throw ConfigError(std::string(op) + ": fields live on different grids");
}

} // namespace hallmhd
