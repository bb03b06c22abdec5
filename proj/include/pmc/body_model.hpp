#pragma once

#include <pmc/rng.hpp>
#include <pmc/rotation.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmc {

using Mat3X = Eigen::Matrix3Xd;
using Mat2X = Eigen::Matrix2Xd;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr int kNumJoints = 24;
inline constexpr int kPoseDim = 72;   // 24 x 3 axis-angle
inline constexpr int kShapeDim = 10;
inline constexpr int kNumFootVerts = 192;  // 96 per foot
inline constexpr int kParamDim = kPoseDim + kShapeDim + 3 + 3 + 1;  // 89

// joint indices
enum Joint : int {
    kPelvis = 0, kHipL = 1, kHipR = 2, kSpine1 = 3, kKneeL = 4, kKneeR = 5,
    kSpine2 = 6, kAnkleL = 7, kAnkleR = 8, kSpine3 = 9, kToeL = 10, kToeR = 11,
    kNeck = 12, kCollarL = 13, kCollarR = 14, kHead = 15, kShoulderL = 16,
    kShoulderR = 17, kElbowL = 18, kElbowR = 19, kWristL = 20, kWristR = 21,
    kHandL = 22, kHandR = 23
};

inline const std::array<int, kNumJoints>& joint_parents() {
    static const std::array<int, kNumJoints> p = {
        -1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21};
    return p;
}

/// Model joints in contact with the ground during stance; ankle + toe per side.
inline const std::array<int, 4>& foot_joints() {
    static const std::array<int, 4> f = {kAnkleL, kAnkleR, kToeL, kToeR};
    return f;
}

/// Fixed 17-point keypoint set: model joint backing each keypoint index.
inline const std::array<int, 17>& keypoint_joint_map() {
    static const std::array<int, 17> m = {
        kHead, kNeck, kShoulderL, kShoulderR, kElbowL, kElbowR, kWristL, kWristR,
        kPelvis, kHipL, kHipR, kKneeL, kKneeR, kAnkleL, kAnkleR, kToeL, kToeR};
    return m;
}

/// Keypoint indices that sit on the feet (ankles, toes).
inline const std::array<int, 4>& foot_keypoints() {
    static const std::array<int, 4> f = {13, 14, 15, 16};
    return f;
}

struct BodyTemplate {
    Mat3X vertices;                       // 3 x n, rest pose, meters, y-up, ground at y=0
    Eigen::Matrix<int, 3, Eigen::Dynamic> faces;
    MatX joint_regressor;                 // k x n, rows sum to 1
    MatX skinning_weights;                // k x n, one column per vertex, column sums to 1
    std::vector<int> foot_vertex_ids;     // 192: left 96 then right 96
    MatX shape_basis;                     // 3n x 10, vertex-major xyz stacking

    int num_vertices() const { return int(vertices.cols()); }

    bool topology_compatible(const BodyTemplate& o) const {
        return vertices.cols() == o.vertices.cols() &&
               faces.cols() == o.faces.cols() &&
               joint_regressor.rows() == o.joint_regressor.rows() &&
               joint_regressor.cols() == o.joint_regressor.cols() &&
               foot_vertex_ids == o.foot_vertex_ids;
    }
};

struct BodyParams {
    VecX theta = VecX::Zero(kPoseDim);   // axis-angle per joint, radians
    VecX beta = VecX::Zero(kShapeDim);
    Vec3 global_rot = Vec3::Zero();      // axis-angle
    Vec3 translation = Vec3::Zero();     // meters
    double alpha = 1.0;                  // adult/child blend in [0, 1]

    bool finite() const {
        return theta.allFinite() && beta.allFinite() && global_rot.allFinite() &&
               translation.allFinite() && std::isfinite(alpha);
    }

    /// Flat layout [theta(72), beta(10), R(3), T(3), alpha(1)].
    VecX pack() const {
        VecX x(kParamDim);
        x.segment(0, kPoseDim) = theta;
        x.segment(kPoseDim, kShapeDim) = beta;
        x.segment(kPoseDim + kShapeDim, 3) = global_rot;
        x.segment(kPoseDim + kShapeDim + 3, 3) = translation;
        x[kParamDim - 1] = alpha;
        return x;
    }

    static BodyParams unpack(const VecX& x) {
        BodyParams p;
        p.theta = x.segment(0, kPoseDim);
        p.beta = x.segment(kPoseDim, kShapeDim);
        p.global_rot = x.segment(kPoseDim + kShapeDim, 3);
        p.translation = x.segment(kPoseDim + kShapeDim + 3, 3);
        p.alpha = x[kParamDim - 1];
        return p;
    }
};

struct Camera {
    double fx = 600.0, fy = 600.0, cx = 320.0, cy = 240.0;
};

/// Ground-projected point sets tied to the foot vertex registry.
struct FootPlanes {
    Mat3X points;                    // 3 x 192, rest positions, y = 0
    std::vector<int> source_vertex;  // plane point -> foot vertex id (template index)
    std::vector<int> association;    // registry slot (0..191) -> plane point index
    std::vector<bool> anterior;      // toe-side split flag per plane point
};

/// Adult + child templates sharing topology; alpha blends between them.
struct BodyModel {
    BodyTemplate adult;
    BodyTemplate child;
};

// ---------------------------------------------------------------------------
// template blending

inline BodyTemplate blend_template(const BodyTemplate& adult, const BodyTemplate& child,
                                   double alpha) {
    if (!adult.topology_compatible(child))
        throw std::invalid_argument("blend_template: incompatible topologies");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("blend_template: alpha outside [0,1]");
    BodyTemplate out = adult;  // faces/regressor/skinning/basis from the adult
    out.vertices = alpha * adult.vertices + (1.0 - alpha) * child.vertices;
    return out;
}

// ---------------------------------------------------------------------------
// forward pass

/// Everything the backward pass needs from one forward evaluation.
struct PoseCache {
    Mat3X v_shaped;      // 3 x n
    Mat3X j_rest;        // 3 x k
    std::vector<Mat3> rot_local;
    std::vector<Mat3> rot_global;
    Mat3X j_posed;       // pre-root joint positions
    Mat3X v_posed;       // pre-root vertex positions
    Mat3 root_rot;
    Mat3X vertices;      // world
    Mat3X joints;        // world
};

inline void forward(const BodyModel& model, const BodyParams& params, PoseCache& c) {
    if (!params.finite())
        throw std::invalid_argument("forward: non-finite parameters");
    const BodyTemplate& tpl = model.adult;
    const int n = tpl.num_vertices();
    const auto& parents = joint_parents();

    c.v_shaped = params.alpha * model.adult.vertices +
                 (1.0 - params.alpha) * model.child.vertices;
    if (params.beta.squaredNorm() > 0) {
        Eigen::Map<VecX> vs(c.v_shaped.data(), 3 * n);
        vs += tpl.shape_basis * params.beta;
    }

    c.j_rest = c.v_shaped * tpl.joint_regressor.transpose();

    c.rot_local.resize(kNumJoints);
    c.rot_global.resize(kNumJoints);
    c.j_posed.resize(3, kNumJoints);
    for (int j = 0; j < kNumJoints; ++j) {
        c.rot_local[j] = rodrigues(params.theta.segment<3>(3 * j));
        if (j == 0) {
            c.rot_global[0] = c.rot_local[0];
            c.j_posed.col(0) = c.j_rest.col(0);
        } else {
            const int p = parents[j];
            c.rot_global[j] = c.rot_global[p] * c.rot_local[j];
            c.j_posed.col(j) =
                c.j_posed.col(p) + c.rot_global[p] * (c.j_rest.col(j) - c.j_rest.col(p));
        }
    }

    c.v_posed.resize(3, n);
    const MatX& W = tpl.skinning_weights;
    for (int v = 0; v < n; ++v) {
        Vec3 acc = Vec3::Zero();
        for (int j = 0; j < kNumJoints; ++j) {
            const double w = W(j, v);
            if (w == 0.0) continue;
            acc += w * (c.rot_global[j] * (c.v_shaped.col(v) - c.j_rest.col(j)) +
                        c.j_posed.col(j));
        }
        c.v_posed.col(v) = acc;
    }

    c.root_rot = rodrigues(params.global_rot);
    c.vertices = (c.root_rot * c.v_posed).colwise() + params.translation;
    c.joints = (c.root_rot * c.j_posed).colwise() + params.translation;
}

inline PoseCache forward(const BodyModel& model, const BodyParams& params) {
    PoseCache c;
    forward(model, params, c);
    return c;
}

/// Single-template forward: alpha has no effect (child == adult).
inline PoseCache forward(const BodyTemplate& tpl, const BodyParams& params) {
    return forward(BodyModel{tpl, tpl}, params);
}

/// Pose extra points rigged to the skinning weights of source vertices
/// (used for the foot planes). Returns pre-root positions in `posed`
/// and world positions in `world`.
inline void pose_points(const BodyModel& model, const PoseCache& c, const Mat3X& rest,
                        const std::vector<int>& source_vertex, const BodyParams& params,
                        Mat3X& posed, Mat3X& world) {
    const MatX& W = model.adult.skinning_weights;
    const int m = int(rest.cols());
    posed.resize(3, m);
    for (int i = 0; i < m; ++i) {
        const int v = source_vertex[i];
        Vec3 acc = Vec3::Zero();
        for (int j = 0; j < kNumJoints; ++j) {
            const double w = W(j, v);
            if (w == 0.0) continue;
            acc += w * (c.rot_global[j] * (rest.col(i) - c.j_rest.col(j)) + c.j_posed.col(j));
        }
        posed.col(i) = acc;
    }
    world = (c.root_rot * posed).colwise() + params.translation;
}

// ---------------------------------------------------------------------------
// backward pass

/// Extra skinned point set participating in a backward pass.
struct PointAdjoint {
    const Mat3X* rest = nullptr;                 // 3 x m rest positions
    const std::vector<int>* source_vertex = nullptr;
    const Mat3X* posed = nullptr;                // from pose_points
    Mat3X d_world;                               // dL/d(world position), 3 x m
};

/// Pull world-space adjoints (dL/dvertex, dL/djoint, extra points) back to the
/// 89-dim parameter gradient [theta, beta, R, T, alpha].
inline VecX backward(const BodyModel& model, const BodyParams& params, const PoseCache& c,
                     const Mat3X* d_vertices, const Mat3X* d_joints,
                     const std::vector<PointAdjoint>& extra = {}) {
    const BodyTemplate& tpl = model.adult;
    const int n = tpl.num_vertices();
    const auto& parents = joint_parents();
    const MatX& W = tpl.skinning_weights;

    VecX grad = VecX::Zero(kParamDim);
    auto g_theta = grad.segment(0, kPoseDim);
    auto g_beta = grad.segment(kPoseDim, kShapeDim);

    // translation and root rotation
    Vec3 g_T = Vec3::Zero();
    Mat3 d_root = Mat3::Zero();
    if (d_vertices) {
        g_T += d_vertices->rowwise().sum();
        d_root += *d_vertices * c.v_posed.transpose();
    }
    if (d_joints) {
        g_T += d_joints->rowwise().sum();
        d_root += *d_joints * c.j_posed.transpose();
    }
    for (const auto& e : extra) {
        g_T += e.d_world.rowwise().sum();
        d_root += e.d_world * e.posed->transpose();
    }
    grad.segment(kPoseDim + kShapeDim + 3, 3) = g_T;
    grad.segment(kPoseDim + kShapeDim, 3) =
        rodrigues_grad(params.global_rot, c.root_rot, d_root);

    // adjoints in pre-root space
    std::vector<Mat3> d_Rg(kNumJoints, Mat3::Zero());
    Mat3X d_p = Mat3X::Zero(3, kNumJoints);
    Mat3X d_jrest = Mat3X::Zero(3, kNumJoints);
    Mat3X d_vshaped = Mat3X::Zero(3, n);

    const Mat3 Rt = c.root_rot.transpose();

    if (d_vertices) {
        const Mat3X dv = Rt * (*d_vertices);
        for (int v = 0; v < n; ++v) {
            const Vec3 g = dv.col(v);
            if (g.isZero(0.0)) continue;
            for (int j = 0; j < kNumJoints; ++j) {
                const double w = W(j, v);
                if (w == 0.0) continue;
                const Vec3 wg = w * g;
                d_Rg[j].noalias() += wg * (c.v_shaped.col(v) - c.j_rest.col(j)).transpose();
                d_p.col(j) += wg;
                const Vec3 back = c.rot_global[j].transpose() * wg;
                d_vshaped.col(v) += back;
                d_jrest.col(j) -= back;
            }
        }
    }
    for (const auto& e : extra) {
        const Mat3X dq = Rt * e.d_world;
        for (int i = 0; i < int(dq.cols()); ++i) {
            const Vec3 g = dq.col(i);
            if (g.isZero(0.0)) continue;
            const int v = (*e.source_vertex)[i];
            for (int j = 0; j < kNumJoints; ++j) {
                const double w = W(j, v);
                if (w == 0.0) continue;
                const Vec3 wg = w * g;
                d_Rg[j].noalias() += wg * (e.rest->col(i) - c.j_rest.col(j)).transpose();
                d_p.col(j) += wg;
                d_jrest.col(j) -= c.rot_global[j].transpose() * wg;
            }
        }
    }
    if (d_joints) d_p += Rt * (*d_joints);

    // reverse kinematic chain
    for (int j = kNumJoints - 1; j >= 1; --j) {
        const int p = parents[j];
        d_p.col(p) += d_p.col(j);
        d_Rg[p].noalias() += d_p.col(j) * (c.j_rest.col(j) - c.j_rest.col(p)).transpose();
        const Vec3 back = c.rot_global[p].transpose() * d_p.col(j);
        d_jrest.col(j) += back;
        d_jrest.col(p) -= back;
        d_Rg[p].noalias() += d_Rg[j] * c.rot_local[j].transpose();
        const Mat3 d_Rl = c.rot_global[p].transpose() * d_Rg[j];
        g_theta.segment<3>(3 * j) =
            rodrigues_grad(params.theta.segment<3>(3 * j), c.rot_local[j], d_Rl);
    }
    d_jrest.col(0) += d_p.col(0);
    g_theta.segment<3>(0) =
        rodrigues_grad(params.theta.segment<3>(0), c.rot_local[0], d_Rg[0]);

    // joint regressor back to shaped vertices, then shape blocks
    d_vshaped.noalias() += d_jrest * tpl.joint_regressor;
    Eigen::Map<const VecX> dvs(d_vshaped.data(), 3 * n);
    g_beta = tpl.shape_basis.transpose() * dvs;
    Eigen::Map<const VecX> adult_v(model.adult.vertices.data(), 3 * n);
    Eigen::Map<const VecX> child_v(model.child.vertices.data(), 3 * n);
    grad[kParamDim - 1] = (adult_v - child_v).dot(dvs);
    return grad;
}

// ---------------------------------------------------------------------------
// camera projection

/// Pinhole projection; points with z <= 0 get valid = false and (0,0).
inline Mat2X project(const Mat3X& points, const Camera& cam, std::vector<bool>* valid = nullptr) {
    const int n = int(points.cols());
    Mat2X out(2, n);
    if (valid) valid->assign(n, true);
    for (int i = 0; i < n; ++i) {
        const double z = points(2, i);
        if (z <= 0.0) {
            if (valid) (*valid)[i] = false;
            out.col(i).setZero();
            continue;
        }
        out(0, i) = cam.fx * points(0, i) / z + cam.cx;
        out(1, i) = cam.fy * points(1, i) / z + cam.cy;
    }
    return out;
}

inline Vec3 unproject(const Eigen::Vector2d& pixel, double depth, const Camera& cam) {
    return Vec3((pixel.x() - cam.cx) * depth / cam.fx,
                (pixel.y() - cam.cy) * depth / cam.fy, depth);
}

// ---------------------------------------------------------------------------
// foot planes

/// Project the 192 rest-pose foot vertices straight down to the ground plane
/// and split each foot into anterior/posterior halves at the bounding-box
/// midpoint along the foot axis (z).
inline FootPlanes build_foot_planes(const BodyTemplate& tpl) {
    FootPlanes fp;
    const int m = int(tpl.foot_vertex_ids.size());
    fp.points.resize(3, m);
    fp.source_vertex.resize(m);
    fp.association.resize(m);
    fp.anterior.resize(m);
    // per-foot z split (left = first 96, right = last 96)
    for (int foot = 0; foot < 2; ++foot) {
        const int lo = foot * (m / 2), hi = lo + m / 2;
        double zmin = 1e30, zmax = -1e30;
        for (int i = lo; i < hi; ++i) {
            const double z = tpl.vertices(2, tpl.foot_vertex_ids[i]);
            zmin = std::min(zmin, z);
            zmax = std::max(zmax, z);
        }
        const double zmid = 0.5 * (zmin + zmax);
        for (int i = lo; i < hi; ++i) {
            const int vid = tpl.foot_vertex_ids[i];
            fp.points.col(i) = Vec3(tpl.vertices(0, vid), 0.0, tpl.vertices(2, vid));
            fp.source_vertex[i] = vid;
            fp.association[i] = i;
            fp.anterior[i] = tpl.vertices(2, vid) > zmid;
        }
    }
    return fp;
}

// ---------------------------------------------------------------------------
// procedural template construction

namespace detail {

struct BuildSpec {
    double scale = 1.0;        // overall skeleton scale (heights from ground)
    double radius_scale = 1.0; // limb thickness relative to scale
    double head_scale = 1.0;   // extra head size factor
};

inline Mat3X skeleton_rest_joints(double s) {
    Mat3X J(3, kNumJoints);
    auto set = [&](int j, double x, double y, double z) { J.col(j) = s * Vec3(x, y, z); };
    set(kPelvis, 0.00, 0.95, 0.00);
    set(kHipL, 0.09, 0.91, 0.00);
    set(kHipR, -0.09, 0.91, 0.00);
    set(kSpine1, 0.00, 1.05, 0.00);
    set(kKneeL, 0.10, 0.50, 0.00);
    set(kKneeR, -0.10, 0.50, 0.00);
    set(kSpine2, 0.00, 1.15, 0.00);
    set(kAnkleL, 0.10, 0.08, -0.02);
    set(kAnkleR, -0.10, 0.08, -0.02);
    set(kSpine3, 0.00, 1.26, 0.00);
    set(kToeL, 0.10, 0.02, 0.12);
    set(kToeR, -0.10, 0.02, 0.12);
    set(kNeck, 0.00, 1.40, 0.00);
    set(kCollarL, 0.07, 1.32, 0.00);
    set(kCollarR, -0.07, 1.32, 0.00);
    set(kHead, 0.00, 1.52, 0.00);
    set(kShoulderL, 0.17, 1.35, 0.00);
    set(kShoulderR, -0.17, 1.35, 0.00);
    set(kElbowL, 0.43, 1.35, 0.00);
    set(kElbowR, -0.43, 1.35, 0.00);
    set(kWristL, 0.68, 1.35, 0.00);
    set(kWristR, -0.68, 1.35, 0.00);
    set(kHandL, 0.76, 1.35, 0.00);
    set(kHandR, -0.76, 1.35, 0.00);
    return J;
}

inline double bone_radius(int child_joint) {
    switch (child_joint) {
        case kHipL: case kHipR: return 0.055;
        case kKneeL: case kKneeR: return 0.065;
        case kAnkleL: case kAnkleR: return 0.045;
        case kToeL: case kToeR: return 0.030;
        case kSpine1: case kSpine2: case kSpine3: return 0.11;
        case kNeck: return 0.05;
        case kHead: return 0.07;
        case kCollarL: case kCollarR: return 0.05;
        case kShoulderL: case kShoulderR: return 0.045;
        case kElbowL: case kElbowR: return 0.042;
        case kWristL: case kWristR: return 0.035;
        case kHandL: case kHandR: return 0.03;
        default: return 0.05;
    }
}

inline MatX make_shape_basis(const Mat3X& rest, std::uint64_t seed) {
    const int n = int(rest.cols());
    MatX B = MatX::Zero(3 * n, kShapeDim);
    Rng rng(seed);
    for (int k = 0; k < kShapeDim; ++k) {
        for (int m = 0; m < 3; ++m) {
            Vec3 dir(rng.normal(), rng.normal(), rng.normal());
            dir.normalize();
            const double omega = rng.uniform(1.0, 4.0);
            const double phase = rng.uniform(0.0, 6.28318530717958647692);
            Vec3 amp(rng.normal(0.0, 0.01), rng.normal(0.0, 0.01), rng.normal(0.0, 0.01));
            for (int v = 0; v < n; ++v) {
                const double s = std::sin(omega * dir.dot(rest.col(v)) + phase);
                B.block<3, 1>(3 * v, k) += amp * s;
            }
        }
    }
    return B;
}

}  // namespace detail

/// Deterministic low-resolution humanoid: bone tubes, head cap, joint marker
/// crosses (so the regressor reproduces the skeleton exactly), and two dense
/// 96-vertex sole grids hosting the foot registry.
inline BodyTemplate build_template(const detail::BuildSpec& spec) {
    const double s = spec.scale;
    const Mat3X J = detail::skeleton_rest_joints(s);
    const auto& parents = joint_parents();

    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    // (joint, weight) pairs per vertex
    std::vector<std::vector<std::pair<int, double>>> weights;

    auto push = [&](const Vec3& p, std::vector<std::pair<int, double>> w) {
        verts.push_back(p);
        weights.push_back(std::move(w));
        return int(verts.size()) - 1;
    };

    // joint markers: 4 per joint, average = joint center
    std::vector<std::array<int, 4>> marker_ids(kNumJoints);
    const double mr = 0.01 * s;
    for (int j = 0; j < kNumJoints; ++j) {
        const Vec3 c = J.col(j);
        marker_ids[j] = {push(c + Vec3(mr, 0, 0), {{j, 1.0}}),
                         push(c - Vec3(mr, 0, 0), {{j, 1.0}}),
                         push(c + Vec3(0, 0, mr), {{j, 1.0}}),
                         push(c - Vec3(0, 0, mr), {{j, 1.0}})};
    }

    // bone tubes: 3 rings x 10 vertices
    constexpr int kRing = 10;
    for (int j = 1; j < kNumJoints; ++j) {
        const int p = parents[j];
        const Vec3 a = J.col(p), b = J.col(j);
        Vec3 axis = b - a;
        const double len = axis.norm();
        if (len < 1e-9) continue;
        axis /= len;
        Vec3 u = axis.cross(Vec3::UnitY());
        if (u.norm() < 1e-6) u = axis.cross(Vec3::UnitX());
        u.normalize();
        const Vec3 w = axis.cross(u);
        double r = detail::bone_radius(j) * s * spec.radius_scale;
        if (j == kHead) r *= spec.head_scale;
        int ring_start[3];
        const double fracs[3] = {0.25, 0.5, 0.75};
        const double child_w[3] = {0.0, 0.1, 0.35};
        for (int q = 0; q < 3; ++q) {
            const Vec3 c = a + fracs[q] * len * axis;
            ring_start[q] = int(verts.size());
            std::vector<std::pair<int, double>> ws;
            if (child_w[q] == 0.0)
                ws = {{p, 1.0}};
            else
                ws = {{p, 1.0 - child_w[q]}, {j, child_w[q]}};
            for (int t = 0; t < kRing; ++t) {
                const double ang = 2.0 * M_PI * t / kRing;
                push(c + r * (std::cos(ang) * u + std::sin(ang) * w), ws);
            }
        }
        for (int q = 0; q < 2; ++q)
            for (int t = 0; t < kRing; ++t) {
                const int t2 = (t + 1) % kRing;
                faces.push_back({ring_start[q] + t, ring_start[q] + t2, ring_start[q + 1] + t});
                faces.push_back({ring_start[q] + t2, ring_start[q + 1] + t2, ring_start[q + 1] + t});
            }
    }

    // head cap: 2 rings + crown above the head joint
    {
        const double hr = 0.085 * s * spec.head_scale;
        const Vec3 c = J.col(kHead) + Vec3(0, 0.05 * s, 0);
        int ring_start[2];
        for (int q = 0; q < 2; ++q) {
            const double y = (q == 0) ? 0.0 : 0.06 * s * spec.head_scale;
            const double rr = (q == 0) ? hr : hr * 0.6;
            ring_start[q] = int(verts.size());
            for (int t = 0; t < kRing; ++t) {
                const double ang = 2.0 * M_PI * t / kRing;
                push(c + Vec3(rr * std::cos(ang), y, rr * std::sin(ang)), {{kHead, 1.0}});
            }
        }
        const int crown = push(c + Vec3(0, 0.09 * s * spec.head_scale, 0), {{kHead, 1.0}});
        for (int t = 0; t < kRing; ++t) {
            const int t2 = (t + 1) % kRing;
            faces.push_back({ring_start[0] + t, ring_start[0] + t2, ring_start[1] + t});
            faces.push_back({ring_start[0] + t2, ring_start[1] + t2, ring_start[1] + t});
            faces.push_back({ring_start[1] + t, ring_start[1] + t2, crown});
        }
    }

    // sole grids: 12 rows (z) x 8 cols (x) per foot, slightly above ground
    std::vector<int> foot_ids;
    foot_ids.reserve(kNumFootVerts);
    constexpr int kRows = 12, kCols = 8;
    for (int foot = 0; foot < 2; ++foot) {
        const double side = (foot == 0) ? 1.0 : -1.0;  // left first
        const int ankle = (foot == 0) ? kAnkleL : kAnkleR;
        const int toe = (foot == 0) ? kToeL : kToeR;
        const double cx = side * 0.10 * s;
        const double z0 = -0.07 * s, z1 = 0.17 * s;
        const double x0 = cx - 0.035 * s, x1 = cx + 0.035 * s;
        const double toe_z = J(2, toe);
        const double ankle_z = J(2, ankle);
        const int grid_start = int(verts.size());
        for (int rI = 0; rI < kRows; ++rI) {
            const double z = z0 + (z1 - z0) * rI / double(kRows - 1);
            // ankle near the heel, toe joint near the front
            double wt = (z - ankle_z) / (toe_z + 0.05 * s - ankle_z);
            wt = std::min(1.0, std::max(0.0, wt));
            for (int cI = 0; cI < kCols; ++cI) {
                const double x = x0 + (x1 - x0) * cI / double(kCols - 1);
                const int id = push(Vec3(x, 0.001 * s, z),
                                    wt == 0.0 ? std::vector<std::pair<int, double>>{{ankle, 1.0}}
                                    : wt == 1.0 ? std::vector<std::pair<int, double>>{{toe, 1.0}}
                                    : std::vector<std::pair<int, double>>{{ankle, 1.0 - wt}, {toe, wt}});
                foot_ids.push_back(id);
            }
        }
        for (int rI = 0; rI + 1 < kRows; ++rI)
            for (int cI = 0; cI + 1 < kCols; ++cI) {
                const int a = grid_start + rI * kCols + cI;
                const int b = a + 1, c2 = a + kCols, d = a + kCols + 1;
                faces.push_back({a, b, c2});
                faces.push_back({b, d, c2});
            }
    }

    // assemble
    BodyTemplate tpl;
    const int n = int(verts.size());
    tpl.vertices.resize(3, n);
    for (int v = 0; v < n; ++v) tpl.vertices.col(v) = verts[v];
    tpl.faces.resize(3, int(faces.size()));
    for (size_t f = 0; f < faces.size(); ++f)
        tpl.faces.col(int(f)) = Eigen::Vector3i(faces[f][0], faces[f][1], faces[f][2]);
    tpl.skinning_weights = MatX::Zero(kNumJoints, n);
    for (int v = 0; v < n; ++v)
        for (auto& [j, w] : weights[v]) tpl.skinning_weights(j, v) += w;
    tpl.joint_regressor = MatX::Zero(kNumJoints, n);
    for (int j = 0; j < kNumJoints; ++j)
        for (int t = 0; t < 4; ++t) tpl.joint_regressor(j, marker_ids[j][t]) = 0.25;
    tpl.foot_vertex_ids = foot_ids;
    return tpl;
}

inline BodyModel build_default_model() {
    BodyModel m;
    m.adult = build_template({1.0, 1.0, 1.0});
    m.child = build_template({0.6, 0.75, 1.15});
    // one basis, generated from the adult rest geometry, shared by both
    m.adult.shape_basis = detail::make_shape_basis(m.adult.vertices, 0x5eed0001ULL);
    m.child.shape_basis = m.adult.shape_basis;
    return m;
}

}  // namespace pmc
