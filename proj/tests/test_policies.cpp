#include "doctest.h"
#include "fairdyn/policies.hpp"

using namespace fairdyn;

TEST_CASE("weighted shares are proportional and sum to one") {
  const auto shares = weighted_shares({{1, BigInt(2)}, {2, BigInt(3)}, {3, BigInt(5)}});
  CHECK(shares.at(1) == Frac(2, 10));
  CHECK(shares.at(2) == Frac(3, 10));
  CHECK(shares.at(3) == Frac(5, 10));
  Frac total{0};
  for (const auto& [id, s] : shares) total += s;
  CHECK(total == 1);
}

TEST_CASE("cobb-douglas shares split each dimension by exponent mass") {
  CobbDouglasProfile profile;
  profile.add(1, {Frac(1, 4), Frac(3, 4)});
  profile.add(2, {Frac(1, 2), Frac(1, 2)});
  const auto dims = cobb_douglas_shares(profile, {1, 2});
  REQUIRE(dims.size() == 2);
  CHECK(dims[0].at(1) == Frac(1, 3));  // (1/4) / (1/4 + 1/2)
  CHECK(dims[0].at(2) == Frac(2, 3));
  CHECK(dims[1].at(1) == Frac(3, 5));
  CHECK(dims[1].at(2) == Frac(2, 5));
  for (const auto& dim : dims) {
    Frac total{0};
    for (const auto& [id, s] : dim) total += s;
    CHECK(total == 1);
  }
}

TEST_CASE("cobb-douglas exponents must sum to one") {
  CobbDouglasProfile profile;
  CHECK_THROWS(profile.add(1, {Frac(1, 4), Frac(1, 4)}));
}

TEST_CASE("drf water fill on a worked example") {
  // Jobs: w = (1, 1), r_1 = (1, 4), r_2 = (3, 1).
  // dominant_1 = 4, dominant_2 = 3.
  // dim-1 load = 1/4 + 3/3 = 5/4, dim-2 load = 4/4 + 1/3 = 4/3.
  // lambda = 1 / max(5/4, 4/3) = 3/4, saturating dimension 2.
  const auto sol = drf_water_fill<Frac>({Frac(1), Frac(1)},
                                        {{Frac(1), Frac(4)}, {Frac(3), Frac(1)}});
  CHECK(sol.lambda == Frac(3, 4));
  CHECK(sol.saturated_dim == 1);
  CHECK(sol.rate[0] == Frac(3, 16));
  CHECK(sol.rate[1] == Frac(1, 4));
  CHECK(sol.share[0][0] == Frac(3, 16));
  CHECK(sol.share[0][1] == Frac(3, 4));
  CHECK(sol.share[1][0] == Frac(3, 4));
  CHECK(sol.share[1][1] == Frac(1, 4));
  // Dimension 2 exactly saturated, dimension 1 within capacity.
  CHECK(sol.share[0][1] + sol.share[1][1] == Frac(1));
  CHECK(sol.share[0][0] + sol.share[1][0] < Frac(1));
}

TEST_CASE("drf water fill agrees across rational types") {
  const auto exact = drf_water_fill<Frac>({Frac(2), Frac(3)},
                                          {{Frac(1), Frac(2)}, {Frac(4), Frac(1)}});
  const auto small = drf_water_fill<SmallFrac>({SmallFrac(2), SmallFrac(3)},
                                               {{SmallFrac(1), SmallFrac(2)},
                                                {SmallFrac(4), SmallFrac(1)}});
  CHECK(exact.lambda == small.lambda.to_frac());
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(exact.rate[j] == small.rate[j].to_frac());
    for (std::size_t d = 0; d < 2; ++d)
      CHECK(exact.share[j][d] == small.share[j][d].to_frac());
  }
}

TEST_CASE("drf_shares wraps the water fill on job maps") {
  DrfProfile profile;
  profile.add(1, BigInt(1), {Frac(1), Frac(4)});
  profile.add(2, BigInt(1), {Frac(3), Frac(1)});
  const auto out = drf_shares(profile, {1, 2});
  CHECK(out.lambda == Frac(3, 4));
  CHECK(out.rate.at(1) == Frac(3, 16));
  CHECK(out.rate.at(2) == Frac(1, 4));
  CHECK(out.per_dimension[1].at(1) == Frac(3, 4));
  CHECK(out.saturated_dim == 1);
}

TEST_CASE("monotone adversary certifies and lowers shares") {
  MonotoneAdversaryState state;
  state.c = Frac(2);
  state.imposed[1] = Frac(1, 2);

  AllocMap response;
  response[1] = Frac(1, 4);  // exactly share/c: acceptable
  std::vector<JobId> updated;
  auto cert = monotone_adversary_step(state, response, &updated);
  CHECK(cert.ok);
  CHECK(updated == std::vector<JobId>{1});
  CHECK(state.imposed.at(1) == Frac(1, 8));  // lowered to alloc/c

  // Unchanged allocation: no further lowering.
  updated.clear();
  cert = monotone_adversary_step(state, response, &updated);
  CHECK(cert.ok);
  CHECK(updated.empty());
  CHECK(state.imposed.at(1) == Frac(1, 8));
}

TEST_CASE("monotone adversary rejects bad responses") {
  SUBCASE("not c-approximate") {
    MonotoneAdversaryState state;
    state.imposed[1] = Frac(1, 2);
    AllocMap response;
    response[1] = Frac(1, 8);  // below share/c = 1/4
    CHECK(!monotone_adversary_step(state, response).ok);
  }
  SUBCASE("infeasible total") {
    MonotoneAdversaryState state;
    state.imposed[1] = Frac(1, 2);
    state.imposed[2] = Frac(1, 2);
    AllocMap response;
    response[1] = Frac(3, 4);
    response[2] = Frac(1, 2);
    CHECK(!monotone_adversary_step(state, response).ok);
  }
  SUBCASE("alive job missing from the response") {
    MonotoneAdversaryState state;
    state.imposed[1] = Frac(1, 2);
    CHECK(!monotone_adversary_step(state, {}).ok);
  }
}
