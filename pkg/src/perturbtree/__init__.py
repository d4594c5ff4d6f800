"""Spanning tree embeddings in randomly perturbed dense graphs."""

from .graph import Embedding, EmbeddingError, Graph, GraphError, Tree, embedding_violation, union
from .params import Params

__version__ = "0.1.0"
