#pragma once

#include "kbpair/bracket.hpp"
#include "kbpair/diagram.hpp"
#include "kbpair/error.hpp"
#include "kbpair/expr.hpp"
#include "kbpair/jones.hpp"
#include "kbpair/laurent.hpp"
#include "kbpair/pd.hpp"
#include "kbpair/verify.hpp"
