#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace nodalheat {

EigenfunctionModel make_torus_eigenfunction(int m, int n) {
    if (m < 1 || n < 1) throw InvalidParameter("torus mode indices must be positive");
    EigenfunctionModel u;
    u.kind_ = ModelKind::TorusProduct;
    u.i1_ = m;
    u.i2_ = n;
    u.lambda_ = 4.0 * pi * pi * (m * m + n * n);
    return u;
}

EigenfunctionModel make_rectangle_eigenfunction(int m, int n, double a, double b) {
    if (m < 1 || n < 1) throw InvalidParameter("rectangle mode indices must be positive");
    if (!(a > 0.0) || !(b > 0.0)) throw InvalidParameter("rectangle sides must be positive");
    EigenfunctionModel u;
    u.kind_ = ModelKind::RectangleDirichlet;
    u.i1_ = m;
    u.i2_ = n;
    u.a_ = a;
    u.b_ = b;
    u.lambda_ = pi * pi * (m * m / (a * a) + n * n / (b * b));
    return u;
}

double bessel_zero(int m, int k) {
    if (m < 0 || k < 1) throw InvalidParameter("bessel_zero needs m >= 0, k >= 1");
    auto J = [m](double x) { return std::cyl_bessel_j(static_cast<double>(m), x); };
    const double step = 0.05;
    double x = step;
    double fx = J(x);
    int found = 0;
    while (true) {
        const double xn = x + step;
        const double fn = J(xn);
        if ((fx > 0.0) != (fn > 0.0)) {
            if (++found == k) {
                double lo = x;
                double hi = xn;
                double flo = fx;
                for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = J(mid);
                    if ((fm > 0.0) == (flo > 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        x = xn;
        fx = fn;
    }
}

EigenfunctionModel make_disk_eigenfunction(int m, int k, double radius) {
    if (m < 0 || k < 1) throw InvalidParameter("disk mode needs angular m >= 0 and radial k >= 1");
    if (!(radius > 0.0)) throw InvalidParameter("disk radius must be positive");
    EigenfunctionModel u;
    u.kind_ = ModelKind::DiskBessel;
    u.i1_ = m;
    u.i2_ = k;
    u.a_ = radius;
    u.b_ = radius;
    u.bessel_zero_ = bessel_zero(m, k);
    u.lambda_ = std::pow(u.bessel_zero_ / radius, 2);
    return u;
}

EigenfunctionModel make_cone_model(int k) {
    if (k < 1) throw InvalidParameter("cone degree must be at least 1");
    EigenfunctionModel u;
    u.kind_ = ModelKind::ConeHarmonic;
    u.i1_ = k;
    u.lambda_ = 0.0;
    return u;
}

double EigenfunctionModel::value(Point p) const {
    switch (kind_) {
    case ModelKind::TorusProduct:
        return std::sin(2.0 * pi * i1_ * p.x) * std::sin(2.0 * pi * i2_ * p.y);
    case ModelKind::RectangleDirichlet:
        return std::sin(i1_ * pi * p.x / a_) * std::sin(i2_ * pi * p.y / b_);
    case ModelKind::DiskBessel: {
        const double r = std::hypot(p.x, p.y);
        const double th = std::atan2(p.y, p.x);
        return std::cyl_bessel_j(static_cast<double>(i1_), bessel_zero_ * r / a_) * std::cos(i1_ * th);
    }
    case ModelKind::ConeHarmonic:
        return std::real(std::pow(std::complex<double>(p.x, p.y), i1_));
    }
    return 0.0;
}

Point EigenfunctionModel::gradient(Point p) const {
    switch (kind_) {
    case ModelKind::TorusProduct: {
        const double wx = 2.0 * pi * i1_;
        const double wy = 2.0 * pi * i2_;
        return {wx * std::cos(wx * p.x) * std::sin(wy * p.y), wy * std::sin(wx * p.x) * std::cos(wy * p.y)};
    }
    case ModelKind::RectangleDirichlet: {
        const double wx = i1_ * pi / a_;
        const double wy = i2_ * pi / b_;
        return {wx * std::cos(wx * p.x) * std::sin(wy * p.y), wy * std::sin(wx * p.x) * std::cos(wy * p.y)};
    }
    case ModelKind::DiskBessel: {
        const double kappa = bessel_zero_ / a_;
        const double r = std::hypot(p.x, p.y);
        const double mu = static_cast<double>(i1_);
        if (r < 1e-14) {
            return i1_ == 1 ? Point{0.5 * kappa, 0.0} : Point{0.0, 0.0};
        }
        const double th = std::atan2(p.y, p.x);
        const double jm = std::cyl_bessel_j(mu, kappa * r);
        const double djm = i1_ == 0 ? -std::cyl_bessel_j(1.0, kappa * r)
                                    : 0.5 * (std::cyl_bessel_j(mu - 1.0, kappa * r) -
                                             std::cyl_bessel_j(mu + 1.0, kappa * r));
        const double ur = kappa * djm * std::cos(i1_ * th);
        const double uth_over_r = -mu * jm * std::sin(i1_ * th) / r;
        return {std::cos(th) * ur - std::sin(th) * uth_over_r, std::sin(th) * ur + std::cos(th) * uth_over_r};
    }
    case ModelKind::ConeHarmonic: {
        const std::complex<double> d =
            static_cast<double>(i1_) * std::pow(std::complex<double>(p.x, p.y), i1_ - 1);
        return {std::real(d), -std::imag(d)};
    }
    }
    return {};
}

Box EigenfunctionModel::natural_domain() const {
    switch (kind_) {
    case ModelKind::TorusProduct: return {{0.0, 0.0}, {1.0, 1.0}};
    case ModelKind::RectangleDirichlet: return {{0.0, 0.0}, {a_, b_}};
    case ModelKind::DiskBessel: return {{-1.1 * a_, -1.1 * a_}, {1.1 * a_, 1.1 * a_}};
    case ModelKind::ConeHarmonic: return {{-1.0, -1.0}, {1.0, 1.0}};
    }
    return {};
}

bool EigenfunctionModel::defined_at(Point p) const {
    if (kind_ == ModelKind::DiskBessel) return std::hypot(p.x, p.y) < a_;
    return true;
}

std::string EigenfunctionModel::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
    case ModelKind::TorusProduct: os << "torus:" << i1_ << ',' << i2_; break;
    case ModelKind::RectangleDirichlet: os << "rect:" << i1_ << ',' << i2_ << ',' << a_ << ',' << b_; break;
    case ModelKind::DiskBessel: os << "disk:" << i1_ << ',' << i2_ << ',' << a_; break;
    case ModelKind::ConeHarmonic: os << "cone:" << i1_; break;
    }
    return os.str();
}

namespace {

NormBundle accumulate_norms(const EigenfunctionModel& model, const DomainMask& mask, int label) {
    const GridSpec& g = mask.grid;
    NormBundle nb;
    std::size_t cells = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int l = mask.label_at(i, j);
            if (l == 0 || (label > 0 && l != label)) continue;
            const Point c = g.cell_center(i, j);
            const double v = std::abs(model.value(c));
            nb.l1 += v * g.cell_area();
            nb.linf = std::max(nb.linf, v);
            nb.grad_linf = std::max(nb.grad_linf, norm(model.gradient(c)));
            ++cells;
        }
    }
    if (cells == 0) throw EmptyDomain("norms requested over an empty domain");
    return nb;
}

} // namespace

NormBundle compute_norms(const EigenfunctionModel& model, const DomainMask& mask, int label) {
    mask.require_label(label);
    return accumulate_norms(model, mask, label);
}

NormBundle compute_norms(const EigenfunctionModel& model, const DomainMask& mask) {
    return accumulate_norms(model, mask, 0);
}

GridSpec natural_grid(const EigenfunctionModel& model, int n) {
    const Box b = model.natural_domain();
    const double h = b.width() / n;
    const int ny = static_cast<int>(std::lround(b.height() / h));
    if (ny < 1 || std::abs(ny * h - b.height()) > 1e-9 * b.height()) {
        throw InvalidParameter("natural domain of " + model.describe() + " cannot be tiled by square cells with nx = " +
                               std::to_string(n));
    }
    return GridSpec::make(n, ny, b.lo, b.width(), b.height(), model.periodic(), model.periodic());
}

int min_cells_per_axis(const EigenfunctionModel& model) {
    if (model.eigenvalue() <= 0.0) return 1;
    const double wavelength = 2.0 * pi / std::sqrt(model.eigenvalue());
    return static_cast<int>(std::ceil(model.natural_domain().width() / (wavelength / 10.0)));
}

ScalarField sample_function(const std::function<double(Point)>& f, const GridSpec& grid) {
    ScalarField s;
    s.grid = grid;
    s.values.resize(grid.size());
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) s.values[grid.index(i, j)] = f(grid.cell_center(i, j));
    }
    return s;
}

ScalarField sample_field(const EigenfunctionModel& model, const GridSpec& grid) {
    ScalarField s = sample_function([&](Point p) { return model.value(p); }, grid);
    if (model.kind() == ModelKind::DiskBessel) {
        s.support.assign(grid.size(), 0);
        for (int j = 0; j < grid.ny; ++j) {
            for (int i = 0; i < grid.nx; ++i) {
                const std::size_t k = grid.index(i, j);
                // Off-disk cells keep the analytic continuation so the
                // contour finds the circle r = R.
                s.support[k] = model.defined_at(grid.cell_center(i, j)) ? 1 : 0;
            }
        }
    }
    if (model.eigenvalue() > 0.0) {
        const double wavelength = 2.0 * pi / std::sqrt(model.eigenvalue());
        if (grid.h > wavelength / 10.0) {
            std::ostringstream os;
            os << "grid spacing " << grid.h << " exceeds a tenth of the wavelength " << wavelength << " of "
               << model.describe();
            s.warnings.push_back(os.str());
        }
    }
    return s;
}

} // namespace nodalheat
