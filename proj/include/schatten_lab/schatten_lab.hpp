#pragma once

#include "schatten_lab/error.hpp"
#include "schatten_lab/matrix.hpp"
#include "schatten_lab/spectral.hpp"
#include "schatten_lab/schatten.hpp"
#include "schatten_lab/random.hpp"
#include "schatten_lab/blockmat.hpp"
#include "schatten_lab/inequality.hpp"
#include "schatten_lab/fuzz.hpp"
#include "schatten_lab/channel.hpp"
#include "schatten_lab/optimize.hpp"
