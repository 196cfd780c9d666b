#pragma once

#include <cstdint>
#include <filesystem>

#include "forgery/image.hpp"
#include "forgery/landmarks.hpp"
#include "forgery/rng.hpp"

namespace forgery {

/// Procedural face-like test corpus: gradient background, elliptical face
/// with eye/brow/nose/mouth structure, a matching 68-point sidecar, and a
/// labels CSV. Useful for demos, benchmarks, and end-to-end tests where no
/// real dataset is available.
struct SynthOptions {
    long count = 100;
    int width = 256;
    int height = 256;
    std::uint64_t seed = 0;
    double landmark_coverage = 1.0; ///< fraction of images with sidecars
    double fake_fraction = 0.5;     ///< fraction labeled "fake"
};

struct SynthFace {
    ImageBuffer image;
    LandmarkSet landmarks;
};

/// One face image plus its landmark set, drawn from the given stream.
SynthFace synth_face(int width, int height, DeterministicRng& rng);

/// Write `count` images (img_000000.png ...), their sidecars, and labels.csv
/// under out_dir.
void synth_corpus(const std::filesystem::path& out_dir,
                  const SynthOptions& options);

} // namespace forgery
