# app/netlist_model.py
#
# Unit-delay gate model of the grant logic. Depth is counted in gate levels,
# a technology independent stand-in for the synthesized delay in ns; no
# fanout, wire or LUT effects are modeled.

from math import ceil, log2
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence
import logging

import networkx as nx

from app.arbiter_enums import GateKind, TokenEncoding
from app.arbiter_errors import (
    DimensionError,
    InputAssignmentError,
    StructuralError,
)
from app.arbiter_logger import logger_names
from app.signals import RequestVector

module_logger = logging.getLogger(logger_names.NETLIST)

OUTPUT_KIND = "OUTPUT"

class GateGraph:
    """
    Combinational DAG of an N-port grant block.

    Sources are request INPUT nodes `req{i}` and token register REG nodes
    (`tok{i}` for a one-hot token, `msk{i}` for a thermometer mask). Every
    other node is an AND, OR or NOT gate. `outputs` maps port i to the net
    driving grant output `gnt{i}`. `structure` names the builder family
    ("chain", "tree") and is "netlist" for graphs read from text.
    """

    def __init__(
            self,
            num_ports: int = 0,
            token_encoding: TokenEncoding = TokenEncoding.ONE_HOT,
            name: str = "arbiter",
            structure: str = "netlist"
        ):
        self.name = name
        self.structure = structure
        self.num_ports = num_ports
        self.token_encoding = token_encoding
        self.graph = nx.DiGraph()
        self.outputs: Dict[int, str] = {}
        self._next_id = 0

    def __len__(self):
        return self.graph.number_of_nodes()

    def __contains__(self, node):
        return node in self.graph

    def __repr__(self):
        return (f"<GateGraph(name={self.name!r}, structure={self.structure},"
                + f" ports={self.num_ports}, nodes={len(self)},"
                + f" token={self.token_encoding})>")

    ############################################################################
    # construction
    def add_source(self, node: str, kind: GateKind) -> str:
        if kind not in GateKind.SOURCE:
            raise StructuralError(f"{kind} is not a source kind")
        self.graph.add_node(node, kind=kind, fanin=())
        return node

    def add_gate(self, kind: GateKind, *fanins: str, node: Optional[str] = None) -> str:
        if kind not in GateKind.COMBINATIONAL:
            raise StructuralError(f"{kind} is not a gate kind")
        if kind is GateKind.NOT and len(fanins) != 1:
            raise StructuralError(f"NOT takes one input, got {len(fanins)}")
        if kind is not GateKind.NOT and len(fanins) < 2:
            raise StructuralError(f"{kind} takes two or more inputs")
        for fanin in fanins:
            if fanin not in self.graph:
                raise StructuralError(f"unknown net {fanin!r}")
        if node is None:
            node = f"n{self._next_id}"
            self._next_id += 1
        self.graph.add_node(node, kind=kind, fanin=tuple(fanins))
        self.graph.add_edges_from((fanin, node) for fanin in fanins)
        return node

    def add_output(self, port: int, net: str) -> None:
        if net not in self.graph:
            raise StructuralError(f"unknown net {net!r}")
        self.outputs[port] = net

    def freeze(self) -> "GateGraph":
        nx.freeze(self.graph)
        return self

    ############################################################################
    # queries
    def kind(self, node: str) -> GateKind:
        return self.graph.nodes[node]["kind"]

    def fanin(self, node: str) -> Sequence[str]:
        return self.graph.nodes[node]["fanin"]

    def sources(self) -> List[str]:
        return [n for n in self.graph if self.kind(n) in GateKind.SOURCE]

    def gates(self) -> List[str]:
        return [n for n in self.graph if self.kind(n) in GateKind.COMBINATIONAL]

    def topological_order(self) -> List[str]:
        try:
            return list(nx.lexicographical_topological_sort(self.graph))
        except nx.NetworkXUnfeasible as e:
            cycle = nx.find_cycle(self.graph)
            raise StructuralError(
                f"combinational cycle through {[u for u, _ in cycle]}"
            ) from e

    def token_net(self, port: int) -> str:
        if self.token_encoding is TokenEncoding.THERMOMETER:
            return f"msk{port}"
        return f"tok{port}"

    def assignment(
            self,
            token_index: int,
            requests: RequestVector
        ) -> Dict[str, bool]:
        """ Source values for a token position and a request vector. """
        if len(requests) != self.num_ports:
            raise DimensionError(
                f"{len(requests)} request bits for a {self.num_ports}-port graph"
            )
        values = {}
        for port in range(self.num_ports):
            values[f"req{port}"] = requests[port]
            if self.token_encoding is TokenEncoding.THERMOMETER:
                values[self.token_net(port)] = port >= token_index
            else:
                values[self.token_net(port)] = port == token_index
        return values

    ############################################################################
    # text netlist
    def to_netlist_text(self) -> str:
        """
        One line per node, `id kind fanin...`, in topological order, then
        one `gnt{i} OUTPUT net` line per grant output.
        """
        lines = [
            " ".join([node, str(self.kind(node)), *self.fanin(node)])
            for node in self.topological_order()
        ]
        lines.extend(
            f"gnt{port} {OUTPUT_KIND} {net}"
            for port, net in sorted(self.outputs.items())
        )
        return "\n".join(lines) + "\n"

    @classmethod
    def from_netlist_text(cls, text: str, name: str = "netlist") -> "GateGraph":
        graph = cls(name=name)
        for lineno, line in enumerate(text.splitlines(), start=1):
            fields = line.split()
            if not fields or fields[0].startswith("#"):
                continue
            if len(fields) < 2:
                raise StructuralError(f"line {lineno}: expected `id kind ...`")
            node, kind_name, fanins = fields[0], fields[1], fields[2:]
            try:
                if kind_name == OUTPUT_KIND:
                    if len(fanins) != 1 or not node.startswith("gnt"):
                        raise StructuralError("expected `gnt<port> OUTPUT net`")
                    graph.add_output(int(node[3:]), fanins[0])
                    continue
                kind = GateKind.get_flag(kind_name)
                if kind in GateKind.SOURCE:
                    graph.add_source(node, kind)
                    if node.startswith("msk"):
                        graph.token_encoding = TokenEncoding.THERMOMETER
                else:
                    graph.add_gate(kind, *fanins, node=node)
            except (StructuralError, ValueError) as e:
                raise StructuralError(f"line {lineno}: {e}") from e
        graph.num_ports = len(graph.outputs)
        return graph


class DepthRow(NamedTuple):
    n: int
    chain_depth: int
    tree_depth: int

################################################################################
# builders

def _sources(graph: GateGraph, num_ports: int):
    requests = [graph.add_source(f"req{i}", GateKind.INPUT) for i in range(num_ports)]
    tokens = [
        graph.add_source(graph.token_net(i), GateKind.REG) for i in range(num_ports)
    ]
    return requests, tokens


def _degenerate(graph: GateGraph) -> GateGraph:
    """ One port: grant = token AND request. """
    requests, tokens = _sources(graph, 1)
    graph.add_output(0, graph.add_gate(GateKind.AND, tokens[0], requests[0]))
    return graph.freeze()


def build_chain(num_ports: int) -> GateGraph:
    """
    Ripple priority chain. A search carry enters at the one-hot token,
    passes every non-requesting port and stops at the first requesting one.
    The ring is unrolled over positions 0 .. 2N-2 (the second lap covers
    ports 0 .. N-2) so the graph stays acyclic.
    """
    if num_ports < 1:
        raise DimensionError(f"num_ports must be >= 1, not {num_ports}")
    graph = GateGraph(
        num_ports, TokenEncoding.ONE_HOT, name=f"chain{num_ports}", structure="chain"
    )
    if num_ports == 1:
        return _degenerate(graph)

    requests, tokens = _sources(graph, num_ports)
    not_requests = [graph.add_gate(GateKind.NOT, r) for r in requests]

    hits: Dict[int, List[str]] = {port: [] for port in range(num_ports)}
    carry = None
    for position in range(2 * num_ports - 1):
        port = position % num_ports
        if position == 0:
            active = tokens[0]
        elif position < num_ports:
            active = graph.add_gate(GateKind.OR, carry, tokens[port])
        else:
            active = carry
        hits[port].append(graph.add_gate(GateKind.AND, active, requests[port]))
        if position < 2 * num_ports - 2:
            carry = graph.add_gate(GateKind.AND, active, not_requests[port])

    for port, port_hits in hits.items():
        if len(port_hits) == 1:
            graph.add_output(port, port_hits[0])
        else:
            graph.add_output(port, graph.add_gate(GateKind.OR, *port_hits))
    return graph.freeze()


def _prefix_or(graph: GateGraph, nets: List[str]) -> List[str]:
    """
    Kogge-Stone inclusive prefix OR: result[i] = nets[0] | ... | nets[i],
    built in ceil(log2 len(nets)) levels of 2-input OR gates.
    """
    level = list(nets)
    stride = 1
    while stride < len(level):
        level = [
            graph.add_gate(GateKind.OR, level[i], level[i - stride])
            if i >= stride else level[i]
            for i in range(len(level))
        ]
        stride *= 2
    return level


def _first_set(graph: GateGraph, nets: List[str]) -> List[str]:
    """ One-hot lowest set bit: x[i] AND NOT (x[0] | ... | x[i-1]). """
    prefix = _prefix_or(graph, nets[:-1]) if len(nets) > 1 else []
    first = [nets[0]]
    for i in range(1, len(nets)):
        blocked = graph.add_gate(GateKind.NOT, prefix[i - 1])
        first.append(graph.add_gate(GateKind.AND, nets[i], blocked))
    return first


def build_tree(num_ports: int) -> GateGraph:
    """
    Parallel-prefix grant logic over a thermometer mask register
    (msk[i] = 1 iff i >= token). The masked requests and the raw requests
    each feed a lowest-set-bit encoder built on prefix-OR trees; the masked
    result wins whenever any masked request is up. Depth is
    ceil(log2 N) + 4 gate levels for N >= 2.
    """
    if num_ports < 1:
        raise DimensionError(f"num_ports must be >= 1, not {num_ports}")
    graph = GateGraph(
        num_ports, TokenEncoding.THERMOMETER, name=f"tree{num_ports}", structure="tree"
    )
    if num_ports == 1:
        return _degenerate(graph)

    requests, masks = _sources(graph, num_ports)
    masked = [
        graph.add_gate(GateKind.AND, r, m) for r, m in zip(requests, masks)
    ]
    masked_first = _first_set(graph, masked)
    any_masked = _prefix_or(graph, masked)[-1]
    no_masked = graph.add_gate(GateKind.NOT, any_masked)
    wrapped_first = _first_set(graph, requests)

    for port in range(num_ports):
        wrapped = graph.add_gate(GateKind.AND, no_masked, wrapped_first[port])
        graph.add_output(
            port,
            graph.add_gate(GateKind.OR, masked_first[port], wrapped)
        )
    return graph.freeze()


def tree_depth_bound(num_ports: int) -> int:
    """ Closed-form depth of build_tree: 1 for N = 1, ceil(log2 N) + 4 after. """
    if num_ports == 1:
        return 1
    return ceil(log2(num_ports)) + 4

################################################################################
# analysis

_GATE_FUNCTIONS = {
    GateKind.AND: all,
    GateKind.OR: any,
    GateKind.NOT: lambda values: not values[0],
}

def critical_path_depth(graph: GateGraph) -> int:
    """
    Gate count on the longest source-to-output path. Sources contribute 0,
    every gate 1. Raises StructuralError on a combinational cycle.
    """
    depth: Dict[str, int] = {}
    for node in graph.topological_order():
        fanin = graph.fanin(node)
        if graph.kind(node) in GateKind.SOURCE:
            depth[node] = 0
        else:
            depth[node] = 1 + max(depth[f] for f in fanin)
    if not graph.outputs:
        return 0
    return max(depth[net] for net in graph.outputs.values())


def evaluate(graph: GateGraph, inputs: Mapping[str, bool]) -> Dict[str, bool]:
    """
    Evaluate every gate in topological order. Returns {"gnt{i}": value}
    for each grant output.
    """
    missing = [node for node in graph.sources() if node not in inputs]
    if missing:
        raise InputAssignmentError(f"no value for source(s) {sorted(missing)}")
    values: Dict[str, bool] = {}
    for node in graph.topological_order():
        kind = graph.kind(node)
        if kind in GateKind.SOURCE:
            values[node] = bool(inputs[node])
        else:
            values[node] = _GATE_FUNCTIONS[kind]([values[f] for f in graph.fanin(node)])
    return {f"gnt{port}": values[net] for port, net in sorted(graph.outputs.items())}


def grant_port(graph: GateGraph, token_index: int, requests: RequestVector) -> Optional[int]:
    """
    Evaluate the graph for a token position and return the granted port,
    or None. Raises StructuralError if more than one grant is high.
    """
    outputs = evaluate(graph, graph.assignment(token_index, requests))
    high = [int(name[3:]) for name, value in outputs.items() if value]
    if len(high) > 1:
        raise StructuralError(f"{graph.name} raised grants {high} at once")
    return high[0] if high else None


def depth_sweep(ports: Iterable[int]) -> List[DepthRow]:
    """ Chain and tree critical-path depth for each port count. """
    rows = []
    for n in ports:
        row = DepthRow(
            n,
            critical_path_depth(build_chain(n)),
            critical_path_depth(build_tree(n))
        )
        module_logger.info(
            "N=%s: chain depth %s, tree depth %s",
            row.n,
            row.chain_depth,
            row.tree_depth
        )
        rows.append(row)
    return rows
