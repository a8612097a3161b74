"""Numerical laboratory for entanglement of random subspaces.

Core objects are isometric embeddings of C^s into C^d (x) C^n, the pair of
conjugate channels they induce, and the scalar bounds that control the
minimal output entropy of such channels.  Everything is exposed as plain
functions over numpy arrays plus a handful of small validated containers;
the ``cli`` module front-ends the batch workflows.
"""

__version__ = "0.1.0"
