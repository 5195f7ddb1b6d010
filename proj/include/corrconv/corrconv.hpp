#pragma once

#include "corrconv/channels.hpp"
#include "corrconv/linalg.hpp"
#include "corrconv/measures.hpp"
#include "corrconv/protocol.hpp"
#include "corrconv/qudit.hpp"
#include "corrconv/reporting.hpp"
#include "corrconv/states.hpp"
