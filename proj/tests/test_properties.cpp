#include <doctest.h>

#include "properties_impl.hpp"

TEST_SUITE("properties") {

TEST_CASE("determinism under seeds") {
    const auto res = properties::determinism_under_seeds();
    INFO(res.detail);
    CHECK(res.ok);
}

TEST_CASE("scale invariances") {
    const auto res = properties::scale_invariances();
    INFO(res.detail);
    CHECK(res.ok);
}

TEST_CASE("wald statistics are nonnegative") {
    const auto res = properties::wald_nonnegativity();
    INFO(res.detail);
    CHECK(res.ok);
}

TEST_CASE("least-squares residuals are orthogonal to the regressor") {
    const auto res = properties::residual_orthogonality();
    INFO(res.detail);
    CHECK(res.ok);
}

TEST_CASE("the instrument filter is linear") {
    const auto res = properties::ivx_filter_linearity();
    INFO(res.detail);
    CHECK(res.ok);
}

} // TEST_SUITE
