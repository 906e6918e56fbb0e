import logging
from itertools import combinations, permutations
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

from networkx.utils import UnionFind

Perm = Tuple[int, int, int, int]
# (target tetrahedron, target face, images of the four local vertices)
Gluing = Tuple[int, int, Perm]

TET_EDGES: Tuple[Tuple[int, int], ...] = tuple(combinations(range(4), 2))
_ALL_PERMS = frozenset(permutations(range(4)))


class GluingError(ValueError):
    pass


def perm_sign(perm: Sequence[int]) -> int:
    inversions = sum(1 for i, j in combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


def perm_inverse(perm: Sequence[int]) -> Perm:
    inverse = [0] * 4
    for i, image in enumerate(perm):
        inverse[image] = i
    return tuple(inverse)


def face_vertices(face: int) -> Tuple[int, int, int]:
    """Face i of a tetrahedron is the one opposite vertex i."""
    return tuple(v for v in range(4) if v != face)


def _class_ids(elements: Iterable[Hashable], pairs: Iterable[Tuple[Hashable, Hashable]]) -> Tuple[Dict, int]:
    elements = list(elements)
    uf = UnionFind(elements)
    for a, b in pairs:
        uf.union(a, b)
    ids: Dict = {}
    root_ids: Dict = {}
    for element in elements:
        root = uf[element]
        if root not in root_ids:
            root_ids[root] = len(root_ids)
        ids[element] = root_ids[root]
    return ids, len(root_ids)


class Triangulation:
    """
    A closed triangulated 3-manifold given by face gluings. gluings[t][f] = (u, g, perm) glues face f of
    tetrahedron t to face g of tetrahedron u, sending local vertex i of t to local vertex perm[i] of u.
    """

    def __init__(self, gluings: Sequence[Sequence[Optional[Gluing]]]):
        self.gluings: Tuple[Tuple[Gluing, ...], ...] = tuple(
            tuple(None if g is None else (int(g[0]), int(g[1]), tuple(int(x) for x in g[2])) for g in tet)
            for tet in gluings)
        self._validate()

        corners = [(t, v) for t in range(self.num_tetrahedra) for v in range(4)]
        tet_edges = [(t, a, b) for t in range(self.num_tetrahedra) for a, b in TET_EDGES]
        tet_faces = [(t, f) for t in range(self.num_tetrahedra) for f in range(4)]
        corner_pairs, edge_pairs, face_pairs = [], [], []
        for t, f, (u, g, perm) in self._all_gluings():
            face_pairs.append(((t, f), (u, g)))
            for v in face_vertices(f):
                corner_pairs.append(((t, v), (u, perm[v])))
            for a, b in combinations(face_vertices(f), 2):
                x, y = sorted((perm[a], perm[b]))
                edge_pairs.append(((t, a, b), (u, x, y)))
        self._vertex_class, self.num_vertices = _class_ids(corners, corner_pairs)
        self._edge_class, self.num_edges = _class_ids(tet_edges, edge_pairs)
        self._face_class, self.num_faces = _class_ids(tet_faces, face_pairs)

        self.edge_endpoints: Tuple[Tuple[int, int], ...] = self._edge_endpoints()

    @property
    def num_tetrahedra(self) -> int:
        return len(self.gluings)

    def _all_gluings(self):
        for t, tet in enumerate(self.gluings):
            for f, gluing in enumerate(tet):
                yield t, f, gluing

    def _validate(self):
        if not self.gluings:
            raise GluingError("Triangulation has no tetrahedra")
        n = len(self.gluings)
        for t, tet in enumerate(self.gluings):
            if len(tet) != 4:
                raise GluingError(f"Tetrahedron {t} has {len(tet)} face records, expected 4")
        for t, f, gluing in self._all_gluings():
            if gluing is None:
                raise GluingError(f"Face {f} of tetrahedron {t} is not glued")
            u, g, perm = gluing
            if not 0 <= u < n or not 0 <= g < 4:
                raise GluingError(f"Face {f} of tetrahedron {t} is glued to a nonexistent face ({u}, {g})")
            if tuple(perm) not in _ALL_PERMS:
                raise GluingError(f"Gluing of face {f} of tetrahedron {t} has invalid permutation {perm}")
            if perm[f] != g:
                raise GluingError(f"Gluing permutation {perm} does not send face {f} of tetrahedron {t} to face {g}")
            if (u, g) == (t, f):
                raise GluingError(f"Face {f} of tetrahedron {t} is glued to itself")
            back = self.gluings[u][g]
            if back is None or back[0] != t or back[1] != f or tuple(back[2]) != perm_inverse(perm):
                raise GluingError(f"Gluing of face {f} of tetrahedron {t} is not matched by face {g} of "
                                  f"tetrahedron {u}")

    def _edge_endpoints(self) -> Tuple[Tuple[int, int], ...]:
        endpoints: List[Optional[Tuple[int, int]]] = [None] * self.num_edges
        for t in range(self.num_tetrahedra):
            for a, b in TET_EDGES:
                e = self._edge_class[(t, a, b)]
                if endpoints[e] is None:
                    endpoints[e] = tuple(sorted((self.vertex_of(t, a), self.vertex_of(t, b))))
        return tuple(endpoints)

    def vertex_of(self, tet: int, vertex: int) -> int:
        return self._vertex_class[(tet, vertex)]

    def edge_of(self, tet: int, a: int, b: int) -> int:
        a, b = sorted((a, b))
        return self._edge_class[(tet, a, b)]

    def face_of(self, tet: int, face: int) -> int:
        return self._face_class[(tet, face)]

    def face_representatives(self) -> List[Tuple[int, int]]:
        """The first (tet, face) of each face class, indexed by class id."""
        reps: Dict[int, Tuple[int, int]] = {}
        for t in range(self.num_tetrahedra):
            for f in range(4):
                reps.setdefault(self.face_of(t, f), (t, f))
        return [reps[i] for i in range(self.num_faces)]

    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces - self.num_tetrahedra

    def is_orientable(self) -> bool:
        """Tetrahedra can be oriented so that every gluing permutation reverses orientation."""
        orientation: Dict[int, int] = {}
        for start in range(self.num_tetrahedra):
            if start in orientation:
                continue
            orientation[start] = 1
            stack = [start]
            while stack:
                t = stack.pop()
                for u, _, perm in self.gluings[t]:
                    wanted = -orientation[t] * perm_sign(perm)
                    if u not in orientation:
                        orientation[u] = wanted
                        stack.append(u)
                    elif orientation[u] != wanted:
                        return False
        return True

    def summary(self) -> dict:
        return {
            "tetrahedra": self.num_tetrahedra,
            "vertices": self.num_vertices,
            "edges": self.num_edges,
            "faces": self.num_faces,
            "euler_characteristic": self.euler_characteristic(),
            "orientable": self.is_orientable(),
        }

    def to_text(self) -> str:
        lines = []
        for tet in self.gluings:
            lines.append(" ".join(f"{u}:{g}:{''.join(str(x) for x in perm)}" for u, g, perm in tet))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_facets(cls, facets: Sequence[Sequence[Hashable]]) -> "Triangulation":
        """Glue vertex-labelled tetrahedra along faces carrying the same three labels."""
        by_face: Dict[frozenset, List[Tuple[int, int]]] = {}
        for t, facet in enumerate(facets):
            if len(facet) != 4 or len(set(facet)) != 4:
                raise GluingError(f"Facet {t} must have four distinct labels, got {facet}")
            for f in range(4):
                key = frozenset(facet[v] for v in face_vertices(f))
                by_face.setdefault(key, []).append((t, f))
        gluings: List[List[Optional[Gluing]]] = [[None] * 4 for _ in facets]
        for key, sides in by_face.items():
            if len(sides) != 2:
                raise GluingError(f"Face {sorted(key, key=str)} lies in {len(sides)} facets, expected 2")
            (t, f), (u, g) = sides
            perm = tuple(list(facets[u]).index(facets[t][v]) if v != f else g for v in range(4))
            gluings[t][f] = (u, g, perm)
            gluings[u][g] = (t, f, perm_inverse(perm))
        return cls(gluings)


def _parse_gluing(token: str, tet: int, face: int) -> Optional[Gluing]:
    if token == "-":
        return None
    parts = token.split(":")
    if len(parts) != 3 or len(parts[2]) != 4 or not all(p.isdigit() for p in parts):
        raise GluingError(f"Cannot parse gluing {token!r} for face {face} of tetrahedron {tet}")
    return int(parts[0]), int(parts[1]), tuple(int(c) for c in parts[2])


def parse_triangulation(text: str) -> Triangulation:
    """One tetrahedron per line, four tokens 'tet:face:perm' for faces 0-3, '-' for an unglued face."""
    gluings = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        t = len(gluings)
        if len(tokens) != 4:
            raise GluingError(f"Tetrahedron {t} has {len(tokens)} gluing tokens, expected 4")
        gluings.append([_parse_gluing(token, t, f) for f, token in enumerate(tokens)])
    triangulation = Triangulation(gluings)
    if not triangulation.is_orientable():
        logging.warning("Triangulation is not orientable")
    logging.info(f"Triangulation: {triangulation.num_tetrahedra} tetrahedra, {triangulation.num_vertices} vertices, "
                 f"{triangulation.num_edges} edges")
    return triangulation
