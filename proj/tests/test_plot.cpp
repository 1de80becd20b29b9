// Copyright 2026 The gpuscale Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <regex>

#include "gpuscale/plot.hpp"
#include "gpuscale/presets.hpp"

using namespace gpuscale;
using Catch::Matchers::ContainsSubstring;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("four preset curves with fits") {
  std::vector<ScalingCurve> curves;
  std::vector<PowerLawFit> fits;
  for (const auto& name : presets::names()) {
    curves.push_back(sweep(*presets::experiment(name)));
    fits.push_back(fit_power_law(curves.back()));
  }
  const auto svg = render_plot_svg(curves, fits);
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK_THAT(svg, ContainsSubstring("<svg xmlns=\"http://www.w3.org/2000/svg\""));
  CHECK_THAT(svg, ContainsSubstring(">Number of GPUs</text>"));
  CHECK_THAT(svg, ContainsSubstring(">Training time per epoch (s)</text>"));
  CHECK(count(svg, "<g class=\"series\"") == 4);
  CHECK(count(svg, "<line class=\"fit\"") == 4);
  CHECK(count(svg, "<circle class=\"point\"") == 10 + 10 + 10 + 9);
  for (const char* label : {"DimeNet (beta=", "NNConv (beta=", "SchNet (beta=", "PNA (beta="})
    CHECK_THAT(svg, ContainsSubstring(label));
  CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
  // rendering is deterministic
  CHECK(render_plot_svg(curves, fits) == svg);
}

TEST_CASE("exact power law points sit on the fitted line") {
  ScalingCurve c{"law", {}};
  for (GpuCount n : presets::paper_grid())
    c.points.push_back({n, 300 * std::pow(static_cast<double>(n), -0.78)});
  const auto svg = render_plot_svg({c}, {fit_power_law(c)});

  std::smatch m;
  const std::regex line_re(R"re(<line class="fit" x1="([\d.]+)" y1="([\d.]+)" x2="([\d.]+)" y2="([\d.]+)")re");
  REQUIRE(std::regex_search(svg, m, line_re));
  const double x1 = std::stod(m[1]), y1 = std::stod(m[2]), x2 = std::stod(m[3]), y2 = std::stod(m[4]);

  const std::regex pt_re(R"re(<circle class="point" cx="([\d.]+)" cy="([\d.]+)")re");
  int points = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pt_re); it != std::sregex_iterator(); ++it) {
    const double px = std::stod((*it)[1]), py = std::stod((*it)[2]);
    const double dist = std::abs((y2 - y1) * px - (x2 - x1) * py + x2 * y1 - y2 * x1) /
                        std::hypot(y2 - y1, x2 - x1);
    CHECK(dist < 0.02);
    ++points;
  }
  CHECK(points == 10);
}

TEST_CASE("axes are logarithmic") {
  const ScalingCurve c{"c", {{1, 1000}, {10, 100}, {100, 10}, {1000, 1}}};
  const auto fr = make_frame({c}, {});
  const double dx1 = fr.px(10) - fr.px(1), dx2 = fr.px(1000) - fr.px(100);
  CHECK(dx1 == Catch::Approx(dx2));
  CHECK(fr.py(1) > fr.py(1000));  // larger times are higher up
}

TEST_CASE("plot errors") {
  CHECK_THROWS_WITH(render_plot_svg({}, {}), ContainsSubstring("no curves"));
  const ScalingCurve c{"c", {{1, 2}, {2, 1}}};
  CHECK_THROWS_AS(emit_plot({c}, {}, "/nonexistent/dir/plot.svg"), Error);
  CHECK_THROWS_AS(render_plot_svg({c}, {PowerLawFit{}, PowerLawFit{}}), Error);
}

TEST_CASE("labels are escaped") {
  const ScalingCurve c{"a<b & \"c\"", {{1, 2}, {2, 1}}};
  const auto svg = render_plot_svg({c}, {});
  CHECK_THAT(svg, ContainsSubstring("a&lt;b &amp; &quot;c&quot;"));
}
