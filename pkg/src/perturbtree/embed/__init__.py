from .haxell import HaxellResult, check_haxell_conditions
from .oracle import oracle_embed
from .phase1 import (
    EmbedError,
    Phase1Result,
    StarAudit,
    StarPlacement,
    StarPlacementError,
    audit_star_placement,
    embed_phase1,
    pick_disjoint_stars,
)
from .phase2 import BudgetExhausted, Phase2Result, embed_phase2
from .phase3 import Phase3Result, SwapRecord, embed_phase3
from .pipeline import PipelineTrace, embed_spanning_tree
from .reservoir import ReservoirTable, compute_reservoir, tree_image
