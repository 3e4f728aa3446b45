"""One-way quantum deficit and negativity for 2 (x) d bipartite states."""
