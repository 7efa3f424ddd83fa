from typing import List


class UnionFind:
    """
    Disjoint-set forest over the elements 0..n-1.

    Uses union-by-rank and path compression.
    """

    def __init__(self, size: int):
        self._parents = list(range(size))
        self._ranks = [0] * size

    def find(self, element: int) -> int:
        root = element
        while self._parents[root] != root:
            root = self._parents[root]
        # Compress path
        while self._parents[element] != root:
            self._parents[element], element = root, self._parents[element]
        return root

    def union(self, a: int, b: int) -> bool:
        """
        Merge the sets holding ``a`` and ``b``

        Returns:
            bool: True if two distinct sets were merged
        """
        root_a = self.find(a)
        root_b = self.find(b)
        if root_a == root_b:
            return False

        if self._ranks[root_a] < self._ranks[root_b]:
            root_a, root_b = root_b, root_a
        self._parents[root_b] = root_a
        if self._ranks[root_a] == self._ranks[root_b]:
            self._ranks[root_a] += 1
        return True

    def labels(self) -> List[int]:
        """
        Block ids numbered by least member

        Returns:
            List[int]: Canonical block id of every element
        """
        ids = {}
        result = []
        for element in range(len(self._parents)):
            root = self.find(element)
            if root not in ids:
                ids[root] = len(ids)
            result.append(ids[root])
        return result
