#include "tmlambda/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tmlambda {

Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 unit(const Vec3& v)
{
    const double n = norm(v);
    if (n < 1e-300)
        throw std::invalid_argument("unit(): zero vector has no direction");
    return (1.0 / n) * v;
}

namespace {

void require_unit(const Vec3& v, const char* what)
{
    if (std::abs(norm(v) - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(what) + " must be a unit vector");
}

constexpr double kInvSqrt2 = 0.70710678118654752440;

// The y axes are the <110> face diagonals; z completes a right-handed triad.
// Only the component magnitudes are observable downstream, so the individual
// axis signs are a convention.
const std::array<SiteFrame, 6> kFrames = {{
    {1, {kInvSqrt2, -kInvSqrt2, 0}, {kInvSqrt2, kInvSqrt2, 0}, {0, 0, 1}},
    {2, {kInvSqrt2, kInvSqrt2, 0}, {kInvSqrt2, -kInvSqrt2, 0}, {0, 0, -1}},
    {3, {0, kInvSqrt2, -kInvSqrt2}, {0, kInvSqrt2, kInvSqrt2}, {1, 0, 0}},
    {4, {0, kInvSqrt2, kInvSqrt2}, {0, kInvSqrt2, -kInvSqrt2}, {-1, 0, 0}},
    {5, {kInvSqrt2, 0, -kInvSqrt2}, {kInvSqrt2, 0, kInvSqrt2}, {0, -1, 0}},
    {6, {kInvSqrt2, 0, kInvSqrt2}, {kInvSqrt2, 0, -kInvSqrt2}, {0, 1, 0}},
}};

}  // namespace

const std::array<SiteFrame, 6>& site_frames() { return kFrames; }

Vec3 to_local(const SiteFrame& frame, const Vec3& v)
{
    return {dot(v, frame.x_axis), dot(v, frame.y_axis), dot(v, frame.z_axis)};
}

double dipole_projection(const SiteFrame& frame, const Vec3& polarization)
{
    require_unit(polarization, "polarization");
    return std::abs(dot(frame.y_axis, polarization));
}

SiteClassification classify_sites(const Vec3& b_direction, const Vec3& polarization)
{
    require_unit(b_direction, "field direction");
    require_unit(polarization, "polarization");

    constexpr double tol = 1e-9;
    SiteClassification out;

    struct Signature {
        double bx, by, bz, proj;
    };
    std::vector<Signature> signatures;
    std::vector<std::vector<int>>& classes = out.active_classes;

    for (const SiteFrame& frame : site_frames()) {
        const double proj = dipole_projection(frame, polarization);
        if (proj < tol) {
            out.dark_sites.insert(frame.site_id);
            continue;
        }
        const Vec3 local = to_local(frame, b_direction);
        const Signature sig{std::abs(local.x), std::abs(local.y), std::abs(local.z), proj};

        bool placed = false;
        for (std::size_t k = 0; k < classes.size(); ++k) {
            const Signature& ref = signatures[k];
            if (std::abs(sig.bx - ref.bx) < tol && std::abs(sig.by - ref.by) < tol &&
                std::abs(sig.bz - ref.bz) < tol && std::abs(sig.proj - ref.proj) < tol) {
                classes[k].push_back(frame.site_id);
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({frame.site_id});
            signatures.push_back(sig);
        }
    }
    return out;
}

Vec3 bisector_field(double theta)
{
    const double s = std::sin(theta) * kInvSqrt2;
    return {s, s, std::cos(theta)};
}

double bisector_local_by(double theta)
{
    return 0.5 * std::sin(theta) + kInvSqrt2 * std::cos(theta);
}

double theta_neg111() { return -std::acos(1.0 / std::sqrt(3.0)); }

}  // namespace tmlambda
