#include <gtest/gtest.h>

#include "isac/array/array.hpp"

using namespace isac;
using namespace isac::array;

namespace {

double deg(double d) { return d * kPi / 180.0; }

CMat single_path(int n_r, int n_t, cplx alpha, double dod, double doa) {
    GeoChannelSpec spec;
    spec.tx = UlaGeometry::half_wavelength(n_t);
    spec.rx = UlaGeometry::half_wavelength(n_r);
    spec.paths.push_back({alpha, dod, doa});
    return geo_channel(spec).h;
}

}  // namespace

TEST(Steering, Broadside) {
    const CVec a = steering(UlaGeometry::half_wavelength(5), 0.0);
    EXPECT_LT((a - CVec::Ones(5)).norm(), 1e-15);
}

TEST(Steering, Endfire) {
    const CVec a = steering(UlaGeometry::half_wavelength(4), kPi / 2.0);
    const double expect[] = {1.0, -1.0, 1.0, -1.0};
    for (int n = 0; n < 4; ++n) EXPECT_NEAR(std::abs(a[n] - expect[n]), 0.0, 1e-12);
}

TEST(Steering, NormIsN) {
    const auto g = UlaGeometry::half_wavelength(7);
    for (double t = -1.5; t <= 1.5; t += 0.1) EXPECT_NEAR(steering(g, t).squaredNorm(), 7.0, 1e-12);
}

TEST(Steering, DerivativeMatchesFiniteDifference) {
    const auto g = UlaGeometry::half_wavelength(6);
    const double t = 0.3, h = 1e-6;
    const CVec fd = (steering(g, t + h) - steering(g, t - h)) / (2.0 * h);
    EXPECT_LT((steering_derivative(g, t) - fd).norm(), 1e-7);
}

TEST(GeoChannel, SinglePathBroadsideAllOnes) {
    const CMat h = single_path(3, 4, 1.0, 0.0, 0.0);
    EXPECT_LT((h - CMat::Ones(3, 4)).norm(), 1e-14);
    EXPECT_EQ(numerical_rank(h), 1);
}

TEST(GeoChannel, RankEqualsPathCount) {
    RngStream rng(1, 0);
    for (int l = 1; l <= 6; ++l) {
        GeoChannelSpec spec;
        spec.tx = UlaGeometry::half_wavelength(5);
        spec.rx = UlaGeometry::half_wavelength(4);
        for (int i = 0; i < l; ++i)
            spec.paths.push_back({rng.complex_normal(1.0), deg(-60.0 + 120.0 * rng.uniform()), deg(-60.0 + 120.0 * rng.uniform())});
        EXPECT_EQ(numerical_rank(geo_channel(spec).h), std::min({l, 5, 4}));
    }
}

TEST(GeoChannel, Linearity) {
    const CMat h = single_path(3, 3, cplx(0.3, 0.2), 0.2, -0.4);
    const CMat h2 = single_path(3, 3, cplx(0.3, 0.2) * 2.5, 0.2, -0.4);
    EXPECT_LT((h2 - 2.5 * h).norm(), 1e-14);
}

TEST(GeoChannel, RejectsOutOfRangeAngle) { EXPECT_THROW(single_path(2, 2, 1.0, 2.0, 0.0), InvalidArgument); }

TEST(Rayleigh, UnitVariance) {
    RngStream rng(2, 0);
    double acc = 0.0;
    const int draws = 100000 / 16;
    for (int i = 0; i < draws; ++i) acc += rayleigh_channel(4, 4, rng).h.squaredNorm();
    EXPECT_NEAR(acc / (16.0 * draws), 1.0, 0.02);
}

TEST(Rayleigh, StreamsAndReproducibility) {
    RngStream a(3, 0), b(3, 1), c(3, 0);
    const CMat ha = rayleigh_channel(2, 2, a).h;
    EXPECT_NE(ha, rayleigh_channel(2, 2, b).h);
    EXPECT_EQ(ha, rayleigh_channel(2, 2, c).h);
}

TEST(Phased, MatchedGainIdentity) {
    const int nt = 8, nr = 6;
    const cplx alpha(0.3, -0.7);
    const double phi = deg(25.0), theta = deg(-40.0);
    const CMat h = single_path(nr, nt, alpha, phi, theta);
    const CVec f = steering(UlaGeometry::half_wavelength(nt), phi).conjugate();
    const CVec w = steering(UlaGeometry::half_wavelength(nr), theta);
    const double gain = array_gain(h, f, w);
    EXPECT_NEAR(gain / (nt * nr * std::abs(alpha)), 1.0, 1e-12);
}

TEST(Phased, MisSteeredGainSmall) {
    const int n = 64;
    const CMat h = single_path(n, n, 1.0, 0.0, 0.0);
    const CVec f = steering(UlaGeometry::half_wavelength(n), kPi / 2.0).conjugate();
    const CVec w = steering(UlaGeometry::half_wavelength(n), 0.0);
    EXPECT_LT(array_gain(h, f, w), 0.1 * n * n);
}

TEST(Phased, ScalarChannel) {
    RngStream rng(4, 0), replay(4, 0);
    const CMat h{{cplx(0.5, 0.5)}};
    const CVec one = CVec::Ones(1);
    const CVec s{{cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-1.0, 0.0)}};
    const CVec y = apply_phased(h, one, one, s, 0.1, rng);
    const CVec z = add_awgn(CVec(CVec::Zero(3)), 0.1, replay);
    EXPECT_LT((y - (h(0, 0) * s + z)).norm(), 1e-15);
}

TEST(Phased, RejectsNonUnitWeights) {
    RngStream rng(1, 0);
    EXPECT_THROW(apply_phased(CMat::Ones(2, 2), CVec::Constant(2, 0.5), CVec::Ones(2), CVec::Ones(1), 0.0, rng),
                 InvalidArgument);
}

TEST(Precoder, IdentityChannel) {
    const CMat h = CMat::Identity(3, 3);
    const CMat zf = zf_precoder(h).f;
    const CMat mf = mf_precoder(h);
    EXPECT_LT((zf - CMat::Identity(3, 3)).norm(), 1e-12);
    EXPECT_LT((mf - CMat::Identity(3, 3)).norm(), 1e-12);
}

TEST(Precoder, ZfNulling) {
    RngStream rng(5, 0);
    for (int t = 0; t < 20; ++t) {
        const CMat h = rng.complex_normal_matrix(2, 4, 1.0);
        const auto r = zf_precoder(h);
        ASSERT_FALSE(r.rank_deficient);
        const CMat g = h * r.f;
        EXPECT_NEAR(r.f.squaredNorm(), 2.0, 1e-12);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                if (i != k) EXPECT_LT(std::abs(g(i, k)) / std::abs(g(i, i)), 1e-10);
    }
}

TEST(Precoder, RankDeficientFlagged) {
    CMat h(2, 3);
    h.row(0) << 1.0, 2.0, 3.0;
    h.row(1) = 2.0 * h.row(0);
    EXPECT_TRUE(zf_precoder(h).rank_deficient);
}

TEST(Precoder, MfEqualsZfOnOrthogonalRows) {
    RngStream rng(6, 0);
    const CMat q = rng.complex_normal_matrix(4, 4, 1.0).householderQr().householderQ();
    CMat h = q.topRows(2);
    h.row(0) *= 2.0;
    const CMat zf = zf_precoder(h).f;
    const CMat mf = mf_precoder(h);
    for (int k = 0; k < 2; ++k) {
        const cplx ratio = zf.col(k).dot(mf.col(k)) / mf.col(k).squaredNorm();
        EXPECT_LT((zf.col(k) - ratio * mf.col(k)).norm(), 1e-12);
    }
}

TEST(Hybrid, EquivalentPrecoderIsSteeringMatrix) {
    const auto g = UlaGeometry::half_wavelength(6);
    const std::vector<double> angles{-0.4, 0.1, 0.7};
    HybridConfig cfg{steering_matrix(g, angles), CMat::Identity(3, 3)};
    cfg.validate();
    EXPECT_LT((cfg.equivalent_precoder() - steering_matrix(g, angles)).norm(), 1e-15);
}

TEST(Hybrid, SinglePathMatchesDigitalGain) {
    const int nt = 16;
    const double phi = deg(30.0);
    const CMat h = single_path(1, nt, 1.0, phi, 0.0);
    HybridConfig cfg{steering(UlaGeometry::half_wavelength(nt), phi).conjugate(), CMat::Ones(1, 1)};
    const CMat f_hybrid = cfg.equivalent_precoder() / cfg.equivalent_precoder().norm();
    const CMat f_digital = mf_precoder(h);
    EXPECT_GE((h * f_hybrid).norm() / (h * f_digital).norm(), 0.999);
    RngStream rng(7, 0);
    const CVec y = hybrid_apply(h, cfg, CVec::Ones(1), 0.0, rng);
    EXPECT_NEAR(std::abs(y[0]), nt, 1e-10);
}

TEST(Hybrid, MoreStreamsThanChainsRejected) {
    HybridConfig cfg{CMat::Ones(4, 2), CMat::Ones(2, 3)};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Hybrid, NonUnitAnalogRejected) {
    HybridConfig cfg{CMat::Constant(4, 2, 0.5), CMat::Identity(2, 2)};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(Hardening, RatioFallsWithArraySize) {
    const RngStream rng(8, 0);
    const std::vector<int> nts{4, 256};
    const auto rows = hardening_stats(nts, 2, 400, rng);
    EXPECT_GE(rows[0].hardening / rows[1].hardening, 10.0);
    EXPECT_GT(rows[0].favorable, rows[1].favorable);
    // var / E is the N-independent baseline, about 1
    for (const auto& r : rows) EXPECT_NEAR(r.raw_ratio, 1.0, 0.2);
}

TEST(Hardening, DeterministicChannelHasZeroVariance) {
    const std::vector<CVec> draws(10, CVec::Ones(8));
    EXPECT_EQ(hardening_ratio(draws), 0.0);
}

TEST(Hardening, TooFewTrialsRejected) {
    const std::vector<int> nts{4};
    EXPECT_THROW(hardening_stats(nts, 1, 10, RngStream(1, 0)), InvalidArgument);
}

TEST(Distributed, SingleElementScalar) {
    DistributedGeometry g{{Point2(0.0, 0.0)}, {Point2(1.0, 0.0)}};
    const auto r = distributed_response(g, Point2(3.0, 4.0), 0.1);
    ASSERT_EQ(r.tx.size(), 1);
    EXPECT_NEAR(std::abs(r.tx[0]), 1.0, 1e-15);
    const std::vector<DistributedTarget> targets{{Point2(3.0, 4.0), cplx(2.0, 0.0)}};
    const CMat h = distributed_channel(g, targets, 0.1).h;
    EXPECT_NEAR(std::abs(h(0, 0) - 2.0 * r.rx[0] * r.tx[0]), 0.0, 1e-14);
}

TEST(Distributed, EquidistantEqualPhases) {
    std::vector<Point2> ring;
    for (int k = 0; k < 6; ++k) ring.emplace_back(std::cos(k * kPi / 3.0), std::sin(k * kPi / 3.0));
    DistributedGeometry g{ring, ring};
    const auto r = distributed_response(g, Point2(0.0, 0.0), 0.07);
    for (Eigen::Index k = 1; k < 6; ++k) EXPECT_LT(std::abs(r.tx[k] - r.tx[0]), 1e-12);
}

TEST(Distributed, HalfWavelengthShiftFlipsSign) {
    const double lambda = 0.2;
    DistributedGeometry g{{Point2(0.0, 0.0), Point2(5.0, 0.0)}, {Point2(0.0, 0.0)}};
    const Point2 q(3.0, 4.0);
    const Point2 toward = q - (lambda / 2.0) * q.normalized();
    const auto a = distributed_response(g, q, lambda);
    const auto b = distributed_response(g, toward, lambda);
    EXPECT_LT(std::abs(b.tx[0] + a.tx[0]), 1e-9);
}

TEST(Distributed, ColocatedTargetRejected) {
    DistributedGeometry g{{Point2(0.0, 0.0)}, {Point2(1.0, 0.0)}};
    EXPECT_THROW(distributed_response(g, Point2(0.0, 0.0), 0.1), InvalidArgument);
}

TEST(VirtualArray, RankGrowsWithAperture) {
    const auto tx = UlaGeometry::half_wavelength(3);
    const auto rx = UlaGeometry{4, 1.5, 1.0};  // spacing N_t d: filled 12-element virtual array
    const std::vector<double> angles{-0.6, -0.3, 0.0, 0.2, 0.4, 0.55, 0.7};
    EXPECT_EQ(virtual_array_rank(tx, rx, angles), 7);
    const auto v = virtual_steering(tx, rx, 0.3);
    EXPECT_EQ(v.size(), 12);
    EXPECT_NEAR(v.squaredNorm(), 12.0, 1e-12);
}
