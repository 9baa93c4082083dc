"""misslink: benchmarks for missing-interaction inference on small social
graphs — dyadic link prediction, lifted hyperlink prediction, a Chebyshev
spectral hyperlink predictor, and ERGM pseudolikelihood scoring, all under
controlled MCAR/MNAR hyperedge missingness."""

from .errors import (CandidateError, CliqueCapError, DegenerateSplitError,
                     FitError, MisslinkError, ParseError, SamplingError)
from .evaluation import METHODS, TrialResult, aggregate, f1_mcc, roc_auc, run_trial
from .graph import (Graph, MessageLog, SummaryStats, core_k, emit_edgelist,
                    graph_stats, parse_edgelist, parse_message_log,
                    project_messages)
from .hypergraph import (Hypergraph, derive_hypergraph, emit_hyperedges,
                         incidence, maximal_cliques)
from .masking import (CandidateSet, MaskSplit, hp_candidates, lp_candidates,
                      mask, observed_graph, observed_hypergraph,
                      sample_negatives)

__version__ = "0.1.0"
