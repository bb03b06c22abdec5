#include <pmc/body_model.hpp>
#include <pmc/optimizer.hpp>
#include <pmc/rng.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <set>

using namespace pmc;

namespace {

BodyParams random_params(Rng& rng, double pose_scale = 0.3) {
    BodyParams p;
    for (int i = 0; i < kPoseDim; ++i) p.theta[i] = rng.normal(0.0, pose_scale);
    for (int i = 0; i < kShapeDim; ++i) p.beta[i] = rng.normal(0.0, 0.5);
    p.global_rot = Vec3(rng.normal(0, 0.4), rng.normal(0, 0.4), rng.normal(0, 0.4));
    p.translation = Vec3(rng.normal(0, 0.5), rng.normal(0, 0.5), rng.normal(0, 0.5));
    p.alpha = rng.uniform(0.05, 0.95);
    return p;
}

}  // namespace

TEST_CASE("template invariants") {
    const BodyModel model = build_default_model();
    const BodyTemplate& tpl = model.adult;

    REQUIRE(tpl.num_vertices() >= 800);
    REQUIRE(tpl.foot_vertex_ids.size() == kNumFootVerts);
    CHECK(model.child.num_vertices() == tpl.num_vertices());
    CHECK(tpl.topology_compatible(model.child));

    // per-vertex skinning weights sum to 1
    for (int v = 0; v < tpl.num_vertices(); ++v)
        CHECK(tpl.skinning_weights.col(v).sum() == Catch::Approx(1.0).margin(1e-9));

    // unique, in-range foot ids
    std::set<int> ids(tpl.foot_vertex_ids.begin(), tpl.foot_vertex_ids.end());
    CHECK(ids.size() == kNumFootVerts);
    CHECK(*ids.begin() >= 0);
    CHECK(*ids.rbegin() < tpl.num_vertices());

    // regressor rows sum to 1 and reproduce the skeleton at rest
    const Mat3X joints = tpl.vertices * tpl.joint_regressor.transpose();
    const Mat3X expect = detail::skeleton_rest_joints(1.0);
    CHECK((joints - expect).cwiseAbs().maxCoeff() < 1e-12);
    for (int j = 0; j < kNumJoints; ++j)
        CHECK(tpl.joint_regressor.row(j).sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("blend_template") {
    const BodyModel model = build_default_model();

    CHECK(blend_template(model.adult, model.child, 1.0)
              .vertices.isApprox(model.adult.vertices, 1e-15));
    CHECK(blend_template(model.adult, model.child, 0.0)
              .vertices.isApprox(model.child.vertices, 1e-15));

    // alpha=0.5 is the elementwise average (oracle: explicit loop)
    const BodyTemplate mid = blend_template(model.adult, model.child, 0.5);
    for (int v = 0; v < model.adult.num_vertices(); v += 97)
        for (int d = 0; d < 3; ++d)
            CHECK(mid.vertices(d, v) ==
                  Catch::Approx(0.5 * (model.adult.vertices(d, v) + model.child.vertices(d, v)))
                      .margin(1e-12));

    // linear in alpha: midpoint = average of endpoints
    const BodyTemplate a = blend_template(model.adult, model.child, 0.3);
    const BodyTemplate b = blend_template(model.adult, model.child, 0.7);
    const BodyTemplate m = blend_template(model.adult, model.child, 0.5);
    CHECK((0.5 * (a.vertices + b.vertices) - m.vertices).cwiseAbs().maxCoeff() < 1e-12);

    BodyTemplate bad = model.child;
    bad.vertices.conservativeResize(3, bad.vertices.cols() - 1);
    CHECK_THROWS(blend_template(model.adult, bad, 0.5));
}

TEST_CASE("forward identity and translation") {
    const BodyModel model = build_default_model();
    BodyParams rest;  // theta=0, R=0, T=0, beta=0, alpha=1

    const PoseCache c = forward(model, rest);
    CHECK((c.vertices - model.adult.vertices).cwiseAbs().maxCoeff() < 1e-12);

    BodyParams shifted = rest;
    shifted.translation = Vec3(0, 1, 0);
    const PoseCache cs = forward(model, shifted);
    CHECK((cs.vertices - (model.adult.vertices.colwise() + Vec3(0, 1, 0)))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK((cs.joints - (c.joints.colwise() + Vec3(0, 1, 0))).cwiseAbs().maxCoeff() < 1e-12);

    BodyParams bad = rest;
    bad.theta[5] = std::nan("");
    CHECK_THROWS(forward(model, bad));
}

TEST_CASE("forward equivariance") {
    const BodyModel model = build_default_model();
    Rng rng(21);
    const BodyParams p = random_params(rng);

    // translation equivariance, exact
    BodyParams q = p;
    const Vec3 d(0.3, -0.2, 1.1);
    q.translation += d;
    const PoseCache cp = forward(model, p);
    const PoseCache cq = forward(model, q);
    CHECK((cq.vertices - (cp.vertices.colwise() + d)).cwiseAbs().maxCoeff() == 0.0);

    // rotation equivariance about the root
    BodyParams r = p;
    r.translation = Vec3::Zero();
    BodyParams r2 = r;
    const Vec3 extra(0.2, 0.5, -0.1);
    r2.global_rot = log_rotation(rodrigues(extra) * rodrigues(r.global_rot));
    const Mat3 R = rodrigues(extra);
    const PoseCache cr = forward(model, r);
    const PoseCache cr2 = forward(model, r2);
    CHECK((cr2.vertices - R * cr.vertices).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("bone segments stay rigid under pose") {
    const BodyModel model = build_default_model();
    Rng rng(31);
    BodyParams p;
    for (int i = 0; i < kPoseDim; ++i) p.theta[i] = rng.normal(0.0, 0.4);

    const PoseCache c = forward(model, p);
    const auto& W = model.adult.skinning_weights;
    // distances between vertices fully bound to the same joint are preserved
    for (int j : {int(kPelvis), int(kHipL), int(kShoulderR), int(kAnkleL)}) {
        std::vector<int> bound;
        for (int v = 0; v < model.adult.num_vertices() && bound.size() < 6; ++v)
            if (W(j, v) == 1.0) bound.push_back(v);
        REQUIRE(bound.size() >= 2);
        for (size_t a = 0; a + 1 < bound.size(); ++a) {
            const double rest_d =
                (model.adult.vertices.col(bound[a]) - model.adult.vertices.col(bound[a + 1])).norm();
            const double posed_d = (c.vertices.col(bound[a]) - c.vertices.col(bound[a + 1])).norm();
            CHECK(posed_d == Catch::Approx(rest_d).margin(1e-10));
        }
    }
}

TEST_CASE("backward matches finite differences") {
    const BodyModel model = build_default_model();
    Rng rng(41);

    // scalar probe: L = sum(A .* vertices) + sum(B .* joints) + sum(C .* planes)
    const int n = model.adult.num_vertices();
    Mat3X A(3, n), B(3, kNumJoints);
    for (int i = 0; i < A.size(); ++i) A.data()[i] = rng.normal();
    for (int i = 0; i < B.size(); ++i) B.data()[i] = rng.normal();

    const FootPlanes planes = build_foot_planes(model.adult);
    Mat3X C(3, planes.points.cols());
    for (int i = 0; i < C.size(); ++i) C.data()[i] = rng.normal();

    Objective obj = [&](const VecX& x, VecX& grad) {
        const BodyParams p = BodyParams::unpack(x);
        PoseCache c;
        forward(model, p, c);
        Mat3X plane_posed, plane_world;
        pose_points(model, c, planes.points, planes.source_vertex, p, plane_posed, plane_world);
        const double val = (A.array() * c.vertices.array()).sum() +
                           (B.array() * c.joints.array()).sum() +
                           (C.array() * plane_world.array()).sum();
        PointAdjoint pa;
        pa.rest = &planes.points;
        pa.source_vertex = &planes.source_vertex;
        pa.posed = &plane_posed;
        pa.d_world = C;
        grad = backward(model, p, c, &A, &B, {pa});
        return val;
    };

    for (int trial = 0; trial < 3; ++trial) {
        const BodyParams p = random_params(rng);
        CHECK(check_gradient(obj, p.pack(), 1e-6) < 1e-6);
    }
}

TEST_CASE("projection") {
    Camera cam;
    cam.fx = cam.fy = 500;
    cam.cx = cam.cy = 250;

    Mat3X pts(3, 3);
    pts.col(0) = Vec3(0, 0, 1);
    pts.col(1) = Vec3(1, 0, 1);
    pts.col(2) = Vec3(0.5, -0.25, -1.0);  // behind camera
    std::vector<bool> valid;
    const Mat2X px = project(pts, cam, &valid);
    CHECK(px.col(0).isApprox(Eigen::Vector2d(250, 250)));
    CHECK(px.col(1).isApprox(Eigen::Vector2d(750, 250)));
    CHECK(valid[0]);
    CHECK(valid[1]);
    CHECK_FALSE(valid[2]);

    // projective invariance along the ray
    Mat3X p1(3, 1), p2(3, 1);
    p1.col(0) = Vec3(0.3, -0.2, 2.0);
    p2.col(0) = 3.7 * p1.col(0);
    CHECK((project(p1, cam) - project(p2, cam)).norm() < 1e-9);

    // unprojection round trip at known depth
    Rng rng(55);
    for (int i = 0; i < 20; ++i) {
        const Vec3 p(rng.normal(), rng.normal(), rng.uniform(0.5, 5.0));
        Mat3X m(3, 1);
        m.col(0) = p;
        const Vec3 back = unproject(project(m, cam).col(0), p.z(), cam);
        CHECK((back - p).norm() < 1e-9);
    }
}

TEST_CASE("foot planes") {
    const BodyModel model = build_default_model();
    const FootPlanes fp = build_foot_planes(model.adult);

    REQUIRE(fp.points.cols() == kNumFootVerts);
    // all plane points at ground height
    CHECK(fp.points.row(1).cwiseAbs().maxCoeff() < 1e-9);
    // vertical projection: x/z preserved
    for (int i = 0; i < kNumFootVerts; ++i) {
        const int vid = fp.source_vertex[i];
        CHECK(fp.points(0, i) == model.adult.vertices(0, vid));
        CHECK(fp.points(2, i) == model.adult.vertices(2, vid));
    }
    // association is a bijection over the registry
    std::set<int> seen(fp.association.begin(), fp.association.end());
    CHECK(seen.size() == kNumFootVerts);
    // both anterior and posterior sides populated per foot
    int ant = 0;
    for (int i = 0; i < kNumFootVerts / 2; ++i) ant += fp.anterior[i];
    CHECK(ant > 0);
    CHECK(ant < kNumFootVerts / 2);
}
