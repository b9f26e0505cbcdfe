#pragma once

#include "eventdistill/concept_catalog.hpp"
#include "eventdistill/corpus_store.hpp"
#include "eventdistill/error.hpp"
#include "eventdistill/evaluation.hpp"
#include "eventdistill/generation_backend.hpp"
#include "eventdistill/pattern_miner.hpp"
#include "eventdistill/prompt_forge.hpp"
#include "eventdistill/sequence_generator.hpp"
#include "eventdistill/summ_models.hpp"
