#pragma once

// Umbrella header: barcodes, Vietoris-Rips persistence, persistence path
// embeddings, truncated path signatures, signature kernels, and the
// classification harness.

#include "persig/barcode.hpp"
#include "persig/bench.hpp"
#include "persig/bottleneck.hpp"
#include "persig/coefficients.hpp"
#include "persig/common.hpp"
#include "persig/datasets.hpp"
#include "persig/embeddings.hpp"
#include "persig/io.hpp"
#include "persig/kernel.hpp"
#include "persig/learn.hpp"
#include "persig/path.hpp"
#include "persig/rips.hpp"
#include "persig/signature.hpp"
