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
// Test double for the external-filter protocol. Reads one framed PNG from
// stdin and answers according to --mode:
//   heatmap   constant --value, or a left-to-right ramp when --value < 0
//   boxes     two object boxes
//   text      one text region with recognized text
//   sleep     sleep --seconds, then answer like heatmap
//   error     a well-formed error document
//   garbage   unframed bytes
//   truncated a header promising more bytes than follow
//   crash     exit 1 with nothing on stdout

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pat/hash.hpp"
#include "pat/image.hpp"
#include "pat/plugin.hpp"

namespace {

using json = nlohmann::json;

bool read_exact(std::vector<std::uint8_t>& buf, std::size_t n) {
  buf.resize(n);
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::read(STDIN_FILENO, buf.data() + got, n - got);
    if (r <= 0) return false;
    got += static_cast<std::size_t>(r);
  }
  return true;
}

void write_all(const std::vector<std::uint8_t>& bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t w = ::write(STDOUT_FILENO, bytes.data() + done, bytes.size() - done);
    if (w <= 0) return;
    done += static_cast<std::size_t>(w);
  }
}

void respond(const json& doc) {
  const std::string text = doc.dump();
  write_all(pat::encode_frame(std::vector<std::uint8_t>(text.begin(), text.end())));
}

json heatmap_doc(int w, int h, double value) {
  std::vector<double> v(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      v[static_cast<std::size_t>(y) * w + x] = value >= 0.0 ? value : (w > 1 ? double(x) / (w - 1) : 0.0);
    }
  }
  const auto png = pat::encode_png(pat::Heatmap(w, h, std::move(v)));
  return {{"status", "ok"}, {"payload_kind", "heatmap"}, {"heatmap_png_b64", pat::base64_encode(png)}};
}

}  // namespace

int main(int argc, char** argv) {
  std::string mode = "heatmap";
  double value = -1.0;
  double seconds = 0.0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const bool has_next = i + 1 < argc;
    if (arg == "--mode" && has_next) {
      mode = argv[++i];
    } else if (arg == "--value" && has_next) {
      value = std::stod(argv[++i]);
    } else if (arg == "--seconds" && has_next) {
      seconds = std::stod(argv[++i]);
    } else {
      std::cerr << "usage: pat_stub_plugin [--mode M] [--value V] [--seconds S]\n";
      return 64;
    }
  }

  std::vector<std::uint8_t> header, body;
  if (!read_exact(header, 4)) return 2;
  const std::size_t n = (std::size_t(header[0]) << 24) | (std::size_t(header[1]) << 16) |
                        (std::size_t(header[2]) << 8) | header[3];
  if (!read_exact(body, n)) return 2;
  const pat::RasterImage img = pat::load_image(body);
  const int w = img.width(), h = img.height();

  if (mode == "sleep") {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    mode = "heatmap";
  }
  if (mode == "heatmap") {
    respond(heatmap_doc(std::max(1, w / 4), std::max(1, h / 4), value));
  } else if (mode == "boxes") {
    respond({{"status", "ok"},
             {"payload_kind", "boxes"},
             {"boxes",
              {{{"x", 1}, {"y", 1}, {"w", w / 4}, {"h", h / 4}, {"label", "legend"}, {"confidence", 0.9}},
               {{"x", w / 2}, {"y", h / 2}, {"w", w}, {"h", h}, {"label", "logo"}, {"confidence", 0.4}}}}});
  } else if (mode == "text") {
    respond({{"status", "ok"},
             {"payload_kind", "text_regions"},
             {"text_regions",
              {{{"x", 2}, {"y", 2}, {"w", std::max(1, w / 3)}, {"h", 12}, {"text", "Title"},
                {"confidence", 0.8}}}}});
  } else if (mode == "error") {
    respond({{"status", "error"}, {"error", "model weights missing"}});
  } else if (mode == "garbage") {
    const char junk[] = "this is not a frame";
    write_all(std::vector<std::uint8_t>(junk, junk + sizeof(junk) - 1));
  } else if (mode == "truncated") {
    write_all({0, 0, 1, 0, '{', '"'});
  } else if (mode == "crash") {
    std::cerr << "stub plugin: simulated crash\n";
    return 1;
  } else {
    std::cerr << "unknown mode " << mode << "\n";
    return 64;
  }
  return 0;
}
