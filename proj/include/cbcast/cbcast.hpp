#pragma once

#include "cell.hpp"
#include "channel.hpp"
#include "demand.hpp"
#include "error.hpp"
#include "format.hpp"
#include "optimizer.hpp"
#include "payoff.hpp"
#include "random.hpp"
#include "revenue_bound.hpp"
#include "scenario.hpp"
#include "schedule.hpp"
#include "scheduler.hpp"
