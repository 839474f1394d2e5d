#ifndef GESTUREHMM_GESTUREHMM_HPP
#define GESTUREHMM_GESTUREHMM_HPP

#include "gesturehmm/bank.hpp"
#include "gesturehmm/core.hpp"
#include "gesturehmm/experiments.hpp"
#include "gesturehmm/features.hpp"
#include "gesturehmm/gmm.hpp"
#include "gesturehmm/hmm.hpp"
#include "gesturehmm/io.hpp"
#include "gesturehmm/numeric.hpp"
#include "gesturehmm/seqmodel.hpp"
#include "gesturehmm/serialize.hpp"
#include "gesturehmm/smoothing.hpp"
#include "gesturehmm/synth.hpp"
#include "gesturehmm/toml.hpp"

#endif
