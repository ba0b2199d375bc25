#include "padicslope/report_io.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace padicslope;

TEST(IntegerJson, NumbersAndDecimalStrings)
{
    EXPECT_EQ(integer_to_json(Integer(-42)), Json(-42));
    const Integer big("123456789012345678901234567890");
    EXPECT_EQ(integer_to_json(big), Json("123456789012345678901234567890"));
    EXPECT_EQ(integer_from_json(integer_to_json(big)), big);
    EXPECT_EQ(integer_from_json(Json(18446744073709551615ull)), Integer("18446744073709551615"));
    EXPECT_EQ(integer_from_json(Json("-7")), -7);
    EXPECT_THROW(integer_from_json(Json("12a")), format_error);
    EXPECT_THROW(integer_from_json(Json("-")), format_error);
    EXPECT_THROW(integer_from_json(Json(1.5)), format_error);
}

TEST(MatrixJson, RoundTripAndRejections)
{
    IntMatrix m{{1, -2}, {3, 4}};
    m(0, 1) = Integer("-99999999999999999999999");
    EXPECT_EQ(matrix_from_json(Json::parse(matrix_to_json(m).dump())), m);

    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": [[1, 2], [3]]})")), format_error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": []})")), format_error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"({"rows": [[1]], "cols": 1})")), format_error);
    EXPECT_THROW(matrix_from_json(Json::parse(R"([[1]])")), format_error);
}

TEST(PolygonJson, RoundTrip)
{
    std::mt19937_64 rng(4);
    const Prime p(2);
    for (int k = 0; k < 30; ++k) {
        const std::size_t r = 1 + rng() % 5;
        IntMatrix a(r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) a(i, j) = static_cast<long>(rng() % 41) - 20;
        if (k % 5 == 0)
            for (std::size_t j = 0; j < r; ++j) a(0, j) = 0; // singular: trailing zero coefficient
        const auto rep = polygon_report(a, p);
        EXPECT_EQ(polygon_report_from_json(Json::parse(polygon_report_to_json(rep).dump())), rep);
    }
}

TEST(PolygonJson, ZeroMatrixHasInfiniteSegment)
{
    const Json j = polygon_report_to_json(polygon_report(IntMatrix(3), Prime(5)));
    ASSERT_EQ(j.at("segments").size(), 1u);
    EXPECT_EQ(j.at("segments")[0].at("slope"), "inf");
    EXPECT_EQ(j.at("segments")[0].at("length"), 3);
}

TEST(ConfigJson, ParsesAndRoundTrips)
{
    const Json doc = Json::parse(R"({"p": 3, "hilbert": {"d": 1, "h": 1, "n": 12}, "max_rank": 8, "alpha": 1,
                                     "kappa": "auto", "trials": 100, "master_seed": 1, "generator": "PLANTED"})");
    const ExperimentConfig c = config_from_json(doc);
    EXPECT_EQ(c.p, 3u);
    EXPECT_FALSE(c.kappa.has_value());
    EXPECT_EQ(c.generator, PsiStrategy::planted);
    EXPECT_EQ(c.precision_guard, 8);
    const ExperimentConfig again = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(again), config_to_json(c));
}

TEST(ConfigJson, Rejections)
{
    const std::string base = R"("p": 3, "hilbert": {"d": 1, "h": 1, "n": 12}, "alpha": 1, "master_seed": 1)";
    auto parse = [&](const std::string& extra) { return config_from_json(Json::parse("{" + base + extra + "}")); };
    EXPECT_NO_THROW(parse(R"(, "trials": 5)"));
    EXPECT_THROW(parse(R"(, "trials": 5, "colour": 1)"), format_error);
    EXPECT_THROW(parse(""), format_error);
    EXPECT_THROW(parse(R"(, "trials": 0)"), std::invalid_argument);
    EXPECT_THROW(parse(R"(, "trials": 5, "kappa": "most")"), format_error);
    EXPECT_THROW(parse(R"(, "trials": 5, "generator": "RANDOM")"), format_error);
    EXPECT_THROW(parse(R"(, "trials": 5, "profile": {"n": 2, "a": [2]})"), std::invalid_argument);
    EXPECT_THROW(parse(R"(, "trials": 5, "hilbert2": 1)"), format_error);
    EXPECT_THROW(config_from_json(Json::parse(R"({"p": 4, "profile": {"n": 2, "a": [2]}, "alpha": 0, "trials": 1,
                                                  "master_seed": 0})")),
                 std::invalid_argument);
}

TEST(ExperimentJson, ViolationsCarryMatricesAndSummaryCounts)
{
    TrialReport t;
    t.status = TrialStatus::violation;
    t.instance = InstancePair{IntMatrix::identity(2), IntMatrix::identity(2), IntMatrix(2), IntMatrix(2), {}, {}};
    const Json j = trial_to_json(t);
    EXPECT_EQ(j.at("status"), "VIOLATION");
    EXPECT_EQ(matrix_from_json(Json{{"rows", j.at("instance").at("xi")}}), IntMatrix::identity(2));

    ExperimentSummary s;
    s.trials = 3;
    s.accepted = 1;
    s.rejected["not-simple"] = 2;
    const Json sj = summary_to_json(s);
    EXPECT_EQ(sj.at("rejected").at("not-simple"), 2);
    EXPECT_TRUE(sj.at("kappa").is_null());
}
