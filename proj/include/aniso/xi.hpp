// Descriptor for the horizontal norm xi of a cylindrical anisotropy
// phi(x, z) = F(xi(x), z) on R^{N+1}. Bowl computations touch xi only through
// xi-values, dual values and the Wulff volume |W_{xi^0}|.
#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>

#include "aniso/norm.hpp"
#include "aniso/wulff.hpp"

namespace aniso {

inline double unit_ball_volume(int n) {
    return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

class XiDescriptor {
public:
    enum class Kind { Euclidean, Planar, Custom };

    static XiDescriptor Euclidean(int dim) {
        if (dim < 2) throw std::invalid_argument("XiDescriptor: dimension must be >= 2");
        XiDescriptor d;
        d.kind_ = Kind::Euclidean;
        d.dim_ = dim;
        return d;
    }

    static XiDescriptor Planar(PlanarNorm xi) {
        XiDescriptor d;
        d.kind_ = Kind::Planar;
        d.dim_ = 2;
        d.planar_ = std::move(xi);
        return d;
    }

    static XiDescriptor Custom(int dim, std::function<double(std::span<const double>)> xi,
                               double wulff_volume, bool smooth) {
        if (dim < 2) throw std::invalid_argument("XiDescriptor: dimension must be >= 2");
        if (!(wulff_volume > 0))
            throw std::invalid_argument("XiDescriptor: Wulff volume must be positive");
        XiDescriptor d;
        d.kind_ = Kind::Custom;
        d.dim_ = dim;
        d.custom_ = std::move(xi);
        d.volume_ = wulff_volume;
        d.smooth_ = smooth;
        return d;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    double xi(std::span<const double> v) const {
        if (static_cast<int>(v.size()) != dim_)
            throw std::invalid_argument("XiDescriptor::xi: wrong dimension");
        switch (kind_) {
            case Kind::Euclidean: {
                double s = 0;
                for (double c : v) s += c * c;
                return std::sqrt(s);
            }
            case Kind::Planar:
                return planar_.eval(v[0], v[1]);
            case Kind::Custom:
                return custom_(v);
        }
        return 0;
    }

    double xi_dual(std::span<const double> v) const {
        if (static_cast<int>(v.size()) != dim_)
            throw std::invalid_argument("XiDescriptor::xi_dual: wrong dimension");
        switch (kind_) {
            case Kind::Euclidean: {
                double s = 0;
                for (double c : v) s += c * c;
                return std::sqrt(s);
            }
            case Kind::Planar:
                return planar_.dual(v[0], v[1]);
            case Kind::Custom:
                throw std::invalid_argument("XiDescriptor: dual values unavailable for custom xi");
        }
        return 0;
    }

    // |W_{xi^0}|, the volume of the unit dual ball
    double wulff_volume() const;

    bool smooth() const {
        switch (kind_) {
            case Kind::Euclidean:
                return true;
            case Kind::Planar:
                return planar_.smooth();
            case Kind::Custom:
                return smooth_;
        }
        return false;
    }

    const PlanarNorm& planar_norm() const {
        if (kind_ != Kind::Planar)
            throw std::invalid_argument("XiDescriptor: not a planar descriptor");
        return planar_;
    }

private:
    Kind kind_ = Kind::Euclidean;
    int dim_ = 2;
    PlanarNorm planar_;
    std::function<double(std::span<const double>)> custom_;
    double volume_ = 0;
    bool smooth_ = false;
};

inline double XiDescriptor::wulff_volume() const {
    switch (kind_) {
        case Kind::Euclidean:
            return unit_ball_volume(dim_);
        case Kind::Planar:
            return wulff_boundary(planar_, 4096).area();
        case Kind::Custom:
            return volume_;
    }
    return 0;
}

}  // namespace aniso
