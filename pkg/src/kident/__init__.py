"""Structure learning of Markov and Bayesian networks under a CI oracle
that may answer wrongly a bounded number of times."""

from .graphs import (
    Dag,
    MecKey,
    UndirectedGraph,
    graph_from_json,
    graph_to_json,
    make_chain_dag,
    make_chain_undirected,
    make_dag,
    make_undirected,
    markov_equivalent,
    max_pairwise_connectivity,
    mec_key,
    moral_graph,
    named_graph,
    skeleton,
    v_structures,
)
from .separation import chain_d_connected, d_separates, descendants, separates
from .tables import (
    AnswerTable,
    QueryKey,
    apply_flips,
    query_index,
    query_key,
    table_distance,
    table_of_bayes,
    table_of_markov,
    table_size,
)
from .oracle import (
    ExplicitFlips,
    NoErrors,
    OracleInstance,
    RandomFlips,
    make_oracle,
)
from .identify import (
    NearestResult,
    chain_bn_nearest_in_family,
    chain_mn_nearest_closed_form,
    closest_in_family,
    enumerate_dags,
    enumerate_mecs,
    enumerate_undirected,
    kappa_identifiability_bound,
    max_identifiable_k,
    mec_distance_stats,
    nearest_bn,
    nearest_mn,
    single_edge_neighbor_report,
)
from .pc import Cpdag, PcFailure, cpdag_to_dag, pc, pc_orient, pc_skeleton
from .learners import (
    LearnResult,
    brute_force_bnsl,
    brute_force_mnsl,
    initial_graph,
    solve_bnsl,
    solve_mnsl,
)
from .adversary import (
    GameTranscript,
    PromiseInstance,
    promise_bn,
    promise_mn,
    run_game,
)

__version__ = "0.1.0"
