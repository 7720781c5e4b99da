#pragma once

// Umbrella header for the whole toolkit.

#include "polyspectra/certificate.hpp"
#include "polyspectra/common.hpp"
#include "polyspectra/corpus.hpp"
#include "polyspectra/face_wave.hpp"
#include "polyspectra/fourier.hpp"
#include "polyspectra/io.hpp"
#include "polyspectra/linalg.hpp"
#include "polyspectra/ortho_pack.hpp"
#include "polyspectra/polytope.hpp"
#include "polyspectra/tiling.hpp"
