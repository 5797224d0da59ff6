#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "growthlab/growthlab.h"

TEST_CASE("driver handles") {
  gl_driver* drv = nullptr;
  REQUIRE(gl_driver_create("max", 2, nullptr, &drv) == GL_OK);
  const double n[] = {1.0, -2.0, 0.5, -0.5};
  double out = 0.0;
  CHECK(gl_driver_apply(drv, 0.0, n, 4, &out) == GL_OK);
  CHECK(out == 1.0);
  CHECK(gl_driver_apply(drv, 0.0, n, 3, &out) == GL_INVALID_ARGUMENT);
  CHECK(std::strlen(gl_last_error()) > 0);
  int parabolic = -1;
  CHECK(gl_driver_scaling(drv, &parabolic) == GL_OK);
  CHECK(parabolic == 0);
  gl_driver_destroy(drv);

  gl_driver_params p = gl_driver_params_default();
  p.potential = "power";
  p.k = 4;
  REQUIRE(gl_driver_create("argmin", 2, &p, &drv) == GL_OK);
  const double skew[] = {0.0, 1.0, 2.0, 5.0};
  CHECK(gl_driver_apply(drv, 0.0, skew, 4, &out) == GL_OK);
  CHECK(std::abs(out - 2.4214424777194803) <= 1e-12);
  CHECK(gl_driver_scaling(drv, &parabolic) == GL_OK);
  CHECK(parabolic == 1);
  gl_driver_destroy(drv);

  CHECK(gl_driver_create("nonesuch", 2, nullptr, &drv) == GL_CONFIG);
  CHECK(std::string(gl_last_error()).find("nonesuch") != std::string::npos);
  CHECK(gl_driver_create("max", 2, nullptr, nullptr) == GL_INVALID_ARGUMENT);
  CHECK(std::string(gl_status_name(GL_RESOURCE)) == "resource limit");
}

TEST_CASE("field handles") {
  const double lo[] = {-2.0}, hi[] = {2.0};
  gl_field* f = nullptr;
  REQUIRE(gl_field_init("tent", 1, lo, hi, 8, 0.125, 0, &f) == GL_OK);
  int d = 0;
  CHECK(gl_field_dim(f, &d) == GL_OK);
  CHECK(d == 1);
  int64_t blo = 0, bhi = 0;
  CHECK(gl_field_box(f, &blo, &bhi) == GL_OK);
  CHECK(blo == -24);
  CHECK(bhi == 24);
  const int64_t origin[] = {0};
  double v = 0.0;
  CHECK(gl_field_value(f, origin, &v) == GL_OK);
  CHECK(v == 1.0);

  gl_driver* drv = nullptr;
  REQUIRE(gl_driver_create("max", 1, nullptr, &drv) == GL_OK);
  gl_field* g = nullptr;
  REQUIRE(gl_field_step(f, drv, &g) == GL_OK);
  CHECK(gl_field_box(g, &blo, &bhi) == GL_OK);
  CHECK(blo == -23);
  const int64_t outside[] = {24};
  CHECK(gl_field_value(g, outside, &v) == GL_DOMAIN);
  gl_field_destroy(g);
  gl_field_destroy(f);
  gl_driver_destroy(drv);
  CHECK(gl_field_init("nonesuch", 1, lo, hi, 0, 0.1, 0, &f) == GL_CONFIG);
}

TEST_CASE("operator handles") {
  gl_operator* op = nullptr;
  REQUIRE(gl_operator_create("crystalline", 2, 4, 0.5, &op) == GL_OK);
  const double X[] = {7.0, 0.0, 0.0, -2.0}, p[] = {3.0, 1.0};
  double up = 0.0, low = 0.0;
  int singular = -1;
  CHECK(gl_operator_eval(op, X, p, &up, &low, &singular) == GL_OK);
  CHECK(up == 3.5);
  CHECK(low == 3.5);
  CHECK(singular == 0);
  gl_operator_destroy(op);

  REQUIRE(gl_operator_create("weighted_power", 2, 4, 0.5, &op) == GL_OK);
  const double Y[] = {-1.0, 0.0, 0.0, 3.0}, zero[] = {0.0, 0.0};
  CHECK(gl_operator_eval(op, Y, zero, &up, &low, &singular) == GL_OK);
  CHECK(up == 1.5);
  CHECK(low == -0.5);
  CHECK(singular == 1);
  gl_operator_destroy(op);
}

TEST_CASE("config entry points") {
  char* text = nullptr;
  REQUIRE(gl_list(&text) == GL_OK);
  const std::string listing = text;
  gl_string_free(text);
  for (const char* name : {"max", "pospart", "smooth_phi", "argmin", "median", "rsos", "crystalline", "tent"})
    CHECK(listing.find(name) != std::string::npos);

  char* summary = nullptr;
  int all_pass = -1;
  CHECK(gl_run_config("[experiment]\nd = 1\nepsilons = 0.1\n[driver]\nspeed = 2\n", nullptr, 0, 0, &summary, &all_pass) ==
        GL_CONFIG);
  CHECK(std::string(gl_last_error()).find("speed") != std::string::npos);

  int props = -1;
  char* table = nullptr;
  REQUIRE(gl_properties(0, &table, &props) == GL_OK);
  CHECK(props == 1);
  gl_string_free(table);
}
