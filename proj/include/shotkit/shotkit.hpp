#pragma once

// Umbrella header.

#include "shotkit/audio.hpp"
#include "shotkit/compress.hpp"
#include "shotkit/errors.hpp"
#include "shotkit/keyframes.hpp"
#include "shotkit/manifest.hpp"
#include "shotkit/metrics.hpp"
#include "shotkit/moments.hpp"
#include "shotkit/motion.hpp"
#include "shotkit/pipeline.hpp"
#include "shotkit/rng.hpp"
#include "shotkit/sequence.hpp"
#include "shotkit/shots.hpp"
#include "shotkit/sweep.hpp"
#include "shotkit/synthetic.hpp"
#include "shotkit/tensor_io.hpp"
#include "shotkit/types.hpp"
