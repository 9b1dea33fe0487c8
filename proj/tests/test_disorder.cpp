#include "qmf/disorder.hpp"

#include <doctest.h>

#include <cmath>

using namespace qmf;

TEST_CASE("point mass: constant fields and mean") {
    const auto d = FieldDistribution::point_mass(Vec3(0, 0, 1));
    const auto r = sample_fields(d, 3, 99);
    for (const auto& b : r.fields) CHECK((b - Vec3(0, 0, 1)).norm() == 0.0);
    CHECK((d.mean_field_vector() - Vec3(0, 0, 1)).norm() == 0.0);
    CHECK(bbar(r) == doctest::Approx(1.0));
}

TEST_CASE("determinism: identical triples give bit-identical sequences") {
    const auto d = FieldDistribution::gaussian(Vec3(0.1, -0.2, 0.3), 0.7);
    const auto a = sample_fields(d, 32, 12345);
    const auto b = sample_fields(d, 32, 12345);
    for (int i = 0; i < 32; ++i) CHECK((a.fields[i] - b.fields[i]).norm() == 0.0);
    const auto c = sample_fields(d, 32, 12346);
    bool any_diff = false;
    for (int i = 0; i < 32; ++i)
        if ((a.fields[i] - c.fields[i]).norm() > 0) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("prefix property across N") {
    for (const auto& d :
         {FieldDistribution::axis_dichotomous(Axis::z, 1.0),
          FieldDistribution::gaussian(Vec3::Zero(), 1.0),
          FieldDistribution::uniform_box(Vec3(-1, -1, -1), Vec3(1, 1, 1))}) {
        const auto small = sample_fields(d, 8, 7);
        const auto big = sample_fields(d, 12, 7);
        for (int i = 0; i < 8; ++i)
            CHECK((small.fields[i] - big.fields[i]).norm() == 0.0);
    }
}

TEST_CASE("dichotomous: CLT-scale sanity band and constant modulus") {
    const auto d = FieldDistribution::axis_dichotomous(Axis::z, 1.0, 0.5);
    const int n = 10000;
    const auto r = sample_fields(d, n, 2024);
    double mean_z = 0.0;
    for (const auto& b : r.fields) {
        CHECK(std::abs(b.norm() - 1.0) == 0.0);
        mean_z += b.z();
    }
    mean_z /= n;
    CHECK(std::abs(mean_z) < 4.0 / std::sqrt(double(n)));
    CHECK((d.mean_field_vector()).norm() == 0.0);

    const auto d7 = FieldDistribution::axis_dichotomous(Axis::z, 0.7);
    CHECK(bbar(sample_fields(d7, 50, 3)) == doctest::Approx(0.7));
}

TEST_CASE("empirical atoms") {
    const auto d = FieldDistribution::empirical({{Vec3(0, 0, 2), 1.0}});
    CHECK(bbar(sample_fields(d, 3, 1)) == doctest::Approx(2.0));
    CHECK_THROWS_AS(FieldDistribution::empirical({{Vec3(0, 0, 1), 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(FieldDistribution::empirical({{Vec3(0, 0, 1), -1.0},
                                                  {Vec3(0, 0, 0), 2.0}}),
                    std::invalid_argument);
}

TEST_CASE("uniform box mean and parameter validation") {
    const auto d = FieldDistribution::uniform_box(Vec3(0, 0, 0), Vec3(1, 1, 1));
    CHECK((d.mean_field_vector() - Vec3(0.5, 0.5, 0.5)).norm() == 0.0);
    CHECK_THROWS_AS(FieldDistribution::uniform_box(Vec3(1, 0, 0), Vec3(0, 1, 1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(FieldDistribution::gaussian(Vec3::Zero(), -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(FieldDistribution::axis_dichotomous(Axis::z, 1.0, 1.5),
                    std::invalid_argument);
}

TEST_CASE("empirical means match sampling within 5 standard errors") {
    const int n = 100000;
    struct Case {
        FieldDistribution dist;
        double comp_std; // conservative per-component bound
    };
    const Case cases[] = {
        {FieldDistribution::axis_dichotomous(Axis::x, 0.8, 0.3), 0.8},
        {FieldDistribution::gaussian(Vec3(0.2, 0, -0.4), 0.5), 0.5},
        {FieldDistribution::uniform_box(Vec3(-1, 0, 2), Vec3(1, 3, 2.5)), 1.5},
        {FieldDistribution::empirical(
             {{Vec3(1, 0, 0), 0.25}, {Vec3(0, -2, 0), 0.5}, {Vec3(0, 0, 1), 0.25}}),
         2.0},
    };
    for (const auto& c : cases) {
        const auto r = sample_fields(c.dist, n, 555);
        Vec3 mean = Vec3::Zero();
        for (const auto& b : r.fields) mean += b;
        mean /= double(n);
        const Vec3 expect = c.dist.mean_field_vector();
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(mean[k] - expect[k]) < 5.0 * c.comp_std / std::sqrt(double(n)));
    }
}

TEST_CASE("inverse normal CDF reference values") {
    CHECK(rng::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(rng::inverse_normal_cdf(0.0013498980316300945) ==
          doctest::Approx(-3.0).epsilon(1e-9));
    CHECK_THROWS_AS(rng::inverse_normal_cdf(0.0), std::invalid_argument);
}

TEST_CASE("tilt stream never aliases the field stream") {
    const std::uint64_t seed = 42;
    const auto t = GaussianTilt::from_seed(seed);
    CHECK(t.gamma.allFinite());
    const auto d = FieldDistribution::gaussian(Vec3::Zero(), 1.0);
    const auto r = sample_fields(d, 1, seed);
    CHECK((t.gamma - r.fields[0]).norm() > 1e-12);
    CHECK((GaussianTilt::from_seed(seed).gamma - t.gamma).norm() == 0.0);
}

TEST_CASE("distribution JSON codec round trips") {
    const char* docs[] = {
        R"({"kind":"axis_dichotomous","axis":"z","eps":1.0,"p":0.5})",
        R"({"kind":"point_mass","value":[0,0,1]})",
        R"({"kind":"gaussian","mean":[0.1,0.2,0.3],"sigma":0.5})",
        R"({"kind":"uniform_box","lo":[-1,0,0],"hi":[1,0.5,2]})",
        R"({"kind":"empirical","atoms":[{"value":[1,0,0],"weight":0.5},{"value":[0,0,-1],"weight":0.5}]})",
    };
    for (const char* doc : docs) {
        const auto d = FieldDistribution::from_json(nlohmann::json::parse(doc));
        const auto d2 = FieldDistribution::from_json(d.to_json());
        const auto a = sample_fields(d, 6, 1);
        const auto b = sample_fields(d2, 6, 1);
        for (int i = 0; i < 6; ++i) CHECK((a.fields[i] - b.fields[i]).norm() == 0.0);
    }
    CHECK_THROWS_AS(
        FieldDistribution::from_json(nlohmann::json::parse(
            R"({"kind":"axis_dichotomous","axis":"z","eps":1.0,"typo":1})")),
        std::invalid_argument);
    CHECK_THROWS_AS(
        FieldDistribution::from_json(nlohmann::json::parse(R"({"kind":"cauchy"})")),
        std::invalid_argument);
}

TEST_CASE("gaussian empirical std dev is consistent") {
    const auto d = FieldDistribution::gaussian(Vec3::Zero(), 1.0);
    const int n = 100000;
    const auto r = sample_fields(d, n, 77);
    double ss = 0.0;
    for (const auto& b : r.fields) ss += b.x() * b.x();
    ss /= n;
    CHECK(ss == doctest::Approx(1.0).epsilon(0.02));
}
