#pragma once

#include "chainvol/arith.hpp"
#include "chainvol/asymptote.hpp"
#include "chainvol/errors.hpp"
#include "chainvol/invariant.hpp"
#include "chainvol/lemma_lab.hpp"
#include "chainvol/parallel.hpp"
#include "chainvol/report.hpp"
#include "chainvol/special.hpp"
