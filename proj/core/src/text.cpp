/* Copyright 2026 The pat Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "pat/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "pat/error.hpp"

namespace pat {
namespace {

struct Component {
  int id = 0;  // label value in the component map
  BBox box;
  int area = 0;
  // Horizontal run-length statistics, a cheap stroke-width proxy.
  double run_sum = 0.0;
  double run_sq_sum = 0.0;
  int runs = 0;

  double stroke_consistency() const {
    if (runs == 0) return 0.0;
    const double mean = run_sum / runs;
    const double var = std::max(0.0, run_sq_sum / runs - mean * mean);
    return 1.0 / (1.0 + std::sqrt(var) / mean);
  }
};

struct Line {
  BBox box;
  std::vector<int> heights;
  double consistency_sum = 0.0;
  int members = 0;
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

BBox bbox_union(const BBox& a, const BBox& b) {
  const int x0 = std::min(a.x, b.x), y0 = std::min(a.y, b.y);
  const int x1 = std::max(a.x + a.w, b.x + b.w);
  const int y1 = std::max(a.y + a.h, b.y + b.h);
  return {x0, y0, x1 - x0, y1 - y0};
}

std::vector<std::uint8_t> binarize(const GrayImage& gray,
                                   const TextDetectorConfig& cfg,
                                   bool dark_text) {
  const int w = gray.width(), h = gray.height();
  std::vector<std::int64_t> integral(static_cast<std::size_t>(w + 1) * (h + 1), 0);
  for (int y = 0; y < h; ++y) {
    std::int64_t row = 0;
    for (int x = 0; x < w; ++x) {
      row += gray.at(x, y);
      integral[std::size_t(y + 1) * (w + 1) + x + 1] =
          integral[std::size_t(y) * (w + 1) + x + 1] + row;
    }
  }
  const int r = cfg.window / 2;
  std::vector<std::uint8_t> fg(static_cast<std::size_t>(w) * h, 0);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - r), y1 = std::min(h, y + r + 1);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - r), x1 = std::min(w, x + r + 1);
      const std::int64_t sum =
          integral[std::size_t(y1) * (w + 1) + x1] -
          integral[std::size_t(y0) * (w + 1) + x1] -
          integral[std::size_t(y1) * (w + 1) + x0] +
          integral[std::size_t(y0) * (w + 1) + x0];
      const double mean = double(sum) / ((x1 - x0) * (y1 - y0));
      const int v = gray.at(x, y);
      fg[std::size_t(y) * w + x] =
          dark_text ? (v < mean - cfg.offset) : (v > mean + cfg.offset);
    }
  }
  return fg;
}

std::vector<Component> label_components(const std::vector<std::uint8_t>& fg,
                                        int w, int h, std::vector<int>& labels) {
  labels.assign(fg.size(), -1);
  std::vector<Component> comps;
  std::vector<int> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = std::size_t(y) * w + x;
      if (!fg[idx] || labels[idx] >= 0) continue;
      const int id = static_cast<int>(comps.size());
      Component c;
      c.id = id;
      int x0 = x, x1 = x, y0 = y, y1 = y;
      labels[idx] = id;
      stack.push_back(static_cast<int>(idx));
      while (!stack.empty()) {
        const int p = stack.back();
        stack.pop_back();
        const int px = p % w, py = p / w;
        ++c.area;
        x0 = std::min(x0, px); x1 = std::max(x1, px);
        y0 = std::min(y0, py); y1 = std::max(y1, py);
        for (int dy = -1; dy <= 1; ++dy) {
          const int ny = py + dy;
          if (ny < 0 || ny >= h) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = px + dx;
            if (nx < 0 || nx >= w) continue;
            const std::size_t n = std::size_t(ny) * w + nx;
            if (fg[n] && labels[n] < 0) {
              labels[n] = id;
              stack.push_back(static_cast<int>(n));
            }
          }
        }
      }
      c.box = {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
      comps.push_back(c);
    }
  }
  for (int y = 0; y < h; ++y) {
    int x = 0;
    while (x < w) {
      const int id = labels[std::size_t(y) * w + x];
      int end = x + 1;
      while (end < w && labels[std::size_t(y) * w + end] == id) ++end;
      if (id >= 0) {
        const double len = end - x;
        comps[id].run_sum += len;
        comps[id].run_sq_sum += len * len;
        ++comps[id].runs;
      }
      x = end;
    }
  }
  return comps;
}

bool passes_gates(const Component& c, const TextDetectorConfig& cfg) {
  if (c.area < cfg.min_area || c.area > cfg.max_area) return false;
  const double aspect = double(c.box.w) / c.box.h;
  if (aspect < cfg.min_aspect || aspect > cfg.max_aspect) return false;
  const double fill = double(c.area) / double(c.box.area());
  return fill >= cfg.min_fill && fill <= cfg.max_fill;
}

bool same_line(const BBox& a, const BBox& b, const TextDetectorConfig& cfg) {
  const int overlap =
      std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  if (overlap < cfg.min_line_overlap * std::min(a.h, b.h)) return false;
  const int gap = std::max(a.x, b.x) - std::min(a.x + a.w, b.x + b.w);
  return gap <= cfg.merge_gap * std::max(a.h, b.h);
}

// |mean(ring) - mean(ink)| / (stddev(ring) + 1), where the ring is every
// pixel 8-adjacent to the component but outside it. Glyphs sit on a flat
// ground; texture and noise blobs are surrounded by more texture.
double ring_contrast(const GrayImage& gray, const std::vector<int>& labels,
                     const Component& c) {
  const int w = gray.width(), h = gray.height();
  auto is_member = [&](int x, int y) {
    return x >= 0 && y >= 0 && x < w && y < h &&
           labels[std::size_t(y) * w + x] == c.id;
  };
  double ink = 0.0, ring = 0.0, ring_sq = 0.0;
  int ring_n = 0;
  for (int y = std::max(0, c.box.y - 1); y < std::min(h, c.box.y + c.box.h + 1); ++y) {
    for (int x = std::max(0, c.box.x - 1); x < std::min(w, c.box.x + c.box.w + 1); ++x) {
      const double v = gray.at(x, y);
      if (is_member(x, y)) {
        ink += v;
        continue;
      }
      bool adjacent = false;
      for (int dy = -1; dy <= 1 && !adjacent; ++dy) {
        for (int dx = -1; dx <= 1 && !adjacent; ++dx) adjacent = is_member(x + dx, y + dy);
      }
      if (adjacent) {
        ring += v;
        ring_sq += v * v;
        ++ring_n;
      }
    }
  }
  if (ring_n == 0) return 0.0;
  const double ring_mean = ring / ring_n;
  const double ring_sd = std::sqrt(std::max(0.0, ring_sq / ring_n - ring_mean * ring_mean));
  return std::abs(ring_mean - ink / c.area) / (ring_sd + 1.0);
}

std::vector<Component> gated_components(const GrayImage& gray,
                                        const TextDetectorConfig& cfg,
                                        bool dark_text) {
  const auto fg = binarize(gray, cfg, dark_text);
  std::vector<int> labels;
  std::vector<Component> comps =
      label_components(fg, gray.width(), gray.height(), labels);
  std::erase_if(comps, [&](const Component& c) {
    return !passes_gates(c, cfg) ||
           ring_contrast(gray, labels, c) < cfg.min_ring_contrast;
  });
  return comps;
}

bool contains(const BBox& outer, const BBox& inner) {
  return inner.x >= outer.x && inner.y >= outer.y &&
         inner.x + inner.w <= outer.x + outer.w &&
         inner.y + inner.h <= outer.y + outer.h;
}

// A component whose box encloses two or more components of the opposite
// polarity is background squeezed between glyphs, not a glyph.
void drop_halos(std::vector<Component>& comps, const std::vector<Component>& other) {
  std::erase_if(comps, [&](const Component& c) {
    int inside = 0;
    for (const Component& o : other) {
      if (contains(c.box, o.box) && ++inside >= 2) return true;
    }
    return false;
  });
}

std::vector<Line> group_lines(const std::vector<Component>& comps,
                              const TextDetectorConfig& cfg) {
  DisjointSet sets(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    for (std::size_t j = i + 1; j < comps.size(); ++j) {
      if (same_line(comps[i].box, comps[j].box, cfg)) sets.unite(i, j);
    }
  }
  std::vector<Line> lines;
  std::vector<int> line_of(comps.size(), -1);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (line_of[root] < 0) {
      line_of[root] = static_cast<int>(lines.size());
      lines.push_back({comps[i].box, {}, 0.0, 0});
    }
    Line& line = lines[line_of[root]];
    line.box = bbox_union(line.box, comps[i].box);
    line.heights.push_back(comps[i].box.h);
    line.consistency_sum += comps[i].stroke_consistency();
    ++line.members;
  }
  return lines;
}

TextRegion to_region(Line line) {
  auto mid = line.heights.begin() + line.heights.size() / 2;
  std::nth_element(line.heights.begin(), mid, line.heights.end());
  return TextRegion{line.box, double(*mid),
                    std::clamp(line.consistency_sum / line.members, 0.0, 1.0),
                    std::nullopt};
}

}  // namespace

double intersection_area(const BBox& a, const BBox& b) {
  const int w = std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x);
  const int h = std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y);
  return (w > 0 && h > 0) ? double(w) * h : 0.0;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = double(a.area()) + double(b.area()) - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

std::string_view to_string(LegibilityReason reason) {
  return reason == LegibilityReason::kTooSmall ? "too_small" : "low_contrast";
}

void TextDetectorConfig::validate() const {
  if (window < 3 || window % 2 == 0 || min_area < 1 || max_area < min_area ||
      min_aspect <= 0 || max_aspect < min_aspect || min_fill < 0 ||
      max_fill > 1 || max_fill < min_fill || merge_gap < 0 ||
      min_ring_contrast < 0 ||
      min_height < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid text detector config");
  }
}

std::vector<TextRegion> detect_text_regions(const GrayImage& gray,
                                            const TextDetectorConfig& cfg) {
  cfg.validate();
  std::vector<Component> dark_comps = gated_components(gray, cfg, true);
  std::vector<Component> light_comps = gated_components(gray, cfg, false);
  const std::vector<Component> dark_all = dark_comps;
  drop_halos(dark_comps, light_comps);
  drop_halos(light_comps, dark_all);
  std::vector<Line> dark = group_lines(dark_comps, cfg);
  std::vector<Line> light = group_lines(light_comps, cfg);

  // A line from one polarity that mostly covers a line from the other is
  // usually the halo around real glyphs; keep the side with more members.
  std::vector<bool> drop_dark(dark.size(), false), drop_light(light.size(), false);
  for (std::size_t i = 0; i < dark.size(); ++i) {
    for (std::size_t j = 0; j < light.size(); ++j) {
      const double inter = intersection_area(dark[i].box, light[j].box);
      const double smaller = double(std::min(dark[i].box.area(), light[j].box.area()));
      if (inter < 0.8 * smaller) continue;
      const bool keep_dark =
          dark[i].members != light[j].members
              ? dark[i].members > light[j].members
              : dark[i].consistency_sum / dark[i].members >=
                    light[j].consistency_sum / light[j].members;
      (keep_dark ? drop_light[j] : drop_dark[i]) = true;
    }
  }

  std::vector<TextRegion> out;
  for (std::size_t i = 0; i < dark.size(); ++i) {
    if (!drop_dark[i]) out.push_back(to_region(std::move(dark[i])));
  }
  for (std::size_t j = 0; j < light.size(); ++j) {
    if (!drop_light[j]) out.push_back(to_region(std::move(light[j])));
  }
  std::sort(out.begin(), out.end(), [](const TextRegion& a, const TextRegion& b) {
    if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
    if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
    if (a.bbox.w != b.bbox.w) return a.bbox.w < b.bbox.w;
    return a.bbox.h < b.bbox.h;
  });
  return out;
}

std::vector<LegibilityWarning> legibility_flags(
    const std::vector<TextRegion>& regions, double min_height) {
  std::vector<LegibilityWarning> out;
  for (const TextRegion& r : regions) {
    if (r.est_height < min_height) {
      out.push_back({r, LegibilityReason::kTooSmall, min_height});
    }
  }
  return out;
}

std::vector<TextRegion> merge_ocr_results(const std::vector<TextRegion>& builtin,
                                          const std::vector<TextRegion>& external) {
  std::vector<TextRegion> out = external;
  for (const TextRegion& b : builtin) {
    const bool covered = std::any_of(
        external.begin(), external.end(),
        [&](const TextRegion& e) { return iou(b.bbox, e.bbox) > 0.5; });
    if (!covered) out.push_back(b);
  }
  return out;
}

}  // namespace pat
