#pragma once

#include "reloss/chunk_metrics.hpp"
#include "reloss/chunker.hpp"
#include "reloss/error.hpp"
#include "reloss/graph.hpp"
#include "reloss/json_io.hpp"
#include "reloss/lexer.hpp"
#include "reloss/loss.hpp"
#include "reloss/mapping.hpp"
#include "reloss/metadata.hpp"
#include "reloss/retrieval.hpp"
#include "reloss/splitter.hpp"
#include "reloss/text_metrics.hpp"
