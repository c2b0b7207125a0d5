#ifndef TMLAMBDA_GEOMETRY_HPP
#define TMLAMBDA_GEOMETRY_HPP

#include <array>
#include <set>
#include <vector>

namespace tmlambda {

/// Vector in the cubic cell frame ([100],[010],[001] basis), or a triplet of
/// local-frame components after a change of basis. Dimensionless for
/// directions, tesla for fields.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

Vec3 operator+(const Vec3& a, const Vec3& b);
Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 operator*(double s, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);

/// Returns v/|v|. Throws std::invalid_argument on a (near-)zero vector.
Vec3 unit(const Vec3& v);

/// Local orthonormal frame of one of the six orientationally inequivalent
/// D2 substitution sites. y_axis carries the optical transition dipole.
struct SiteFrame {
    int site_id = 0;  // 1..6
    Vec3 x_axis, y_axis, z_axis;
};

/// Partition of the six sites under a field direction and light polarization.
/// Sites with zero dipole-polarization projection are dark; the rest are
/// grouped into classes with identical local |B| components and identical
/// dipole projection.
struct SiteClassification {
    std::set<int> dark_sites;
    std::vector<std::vector<int>> active_classes;
};

/// The fixed frame table. Site 1 has y = [110]/sqrt(2) and z = [001]; the
/// six y axes run along the six <110> face diagonals.
const std::array<SiteFrame, 6>& site_frames();

/// Components of v along the frame axes: (v.x_axis, v.y_axis, v.z_axis).
Vec3 to_local(const SiteFrame& frame, const Vec3& v);

/// |y_axis . polarization| for a unit polarization vector.
double dipole_projection(const SiteFrame& frame, const Vec3& polarization);

/// Classifies the six sites for a unit field direction and unit polarization.
SiteClassification classify_sites(const Vec3& b_direction, const Vec3& polarization);

/// Unit field direction in the (1-10) bisector plane at angle theta (radians)
/// from [001], positive toward [110]:  sin(theta)[110]/sqrt(2) + cos(theta)[001].
Vec3 bisector_field(double theta);

/// Local-frame B_y/B at sites 3 and 5 for a bisector-plane field:
/// sin(theta)/2 + cos(theta)/sqrt(2).
double bisector_local_by(double theta);

/// Bisector-plane angle of the [-1-11] direction: -acos(1/sqrt(3)).
double theta_neg111();

}  // namespace tmlambda

#endif
