#pragma once

#include "dary/error.hpp"
#include "dary/tree.hpp"
#include "dary/walks.hpp"
#include "dary/marks.hpp"
#include "dary/prng.hpp"
#include "dary/io.hpp"
#include "dary/bijections.hpp"
#include "dary/binary_variants.hpp"
#include "dary/sampler.hpp"
#include "dary/oracle.hpp"
