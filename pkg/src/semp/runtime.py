# -*- coding: utf-8 -*-
"""
The concurrent runtime: a pool of threads and a table of channels.

Every step applies exactly one reduction. Pure steps go through the
evaluator; channel requests meet their partner on the other endpoint of the
same channel (synchronous rendezvous, no buffering).
"""

# stdlib
from dataclasses import dataclass
from dataclasses import field
import json
import logging
import random
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple
from typing import Union

# pypi
from zope.interface import implementer

# local
from .evaluator import CloseReq
from .evaluator import COMMUNICATION_REQUESTS
from .evaluator import contract
from .evaluator import decompose
from .evaluator import Decomposition
from .evaluator import ForkReq
from .evaluator import MatchReq
from .evaluator import NewReq
from .evaluator import plug
from .evaluator import ReceiveReq
from .evaluator import Request
from .evaluator import SelectReq
from .evaluator import SendReq
from .evaluator import WaitReq
from .exceptions import RuntimeFault
from .exceptions import RuntimeFault_Communication
from .exceptions import RuntimeFault_Linearity
from .interfaces import IScheduler
from .interfaces import ITraceSink
from .pretty import display
from .pretty import pretty
from .resolve import AliasFolder
from .substitution import NameSupply
from .substitution import substitute
from .terms import App
from .terms import free_vars
from .terms import lift
from .terms import PairIntro
from .terms import Term
from .terms import UNIT_TERM
from .terms import var
from .typechecker import CheckedProgram
from .typechecker import Par
from .typechecker import Process
from .typechecker import Restrict
from .typechecker import Thread
from .types import Branch
from .types import Fun
from .types import In
from .types import Out
from .types import Pair
from .types import Select
from .types import SessionType
from .types import Type
from .types import unfold_all


# ==============================================================================


log = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 100000

RUNNING = "running"
BLOCKED = "blocked"
DONE = "done"

# rule names of the events that are not evaluator steps
R_CLOSE = "R-Close"
R_COM = "R-Com"
R_BRANCH = "R-Branch"
R_NEW = "New"
R_FORK = "Fork"


def endpoint_names(channel_id: int) -> Tuple[str, str]:
    return ("ch%d+" % channel_id, "ch%d-" % channel_id)


# ------------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceEvent(object):
    step: int
    rule: str
    threads: Tuple[int, ...]
    channel: Optional[int] = None
    payload: Optional[str] = None

    def as_text(self) -> str:
        text = "%d %s %s" % (
            self.step,
            self.rule,
            ",".join("t%d" % t for t in self.threads),
        )
        if self.payload is not None:
            text = "%s %s" % (text, self.payload)
        return text

    def as_dict(self) -> dict:
        return {
            "step": self.step,
            "rule": self.rule,
            "threads": list(self.threads),
            "channel": self.channel,
            "payload": self.payload,
        }

    def as_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


@implementer(IScheduler)
class LowestIdScheduler(object):
    def order(self, thread_ids):
        return sorted(thread_ids)


@implementer(IScheduler)
class RandomizedScheduler(object):
    """a seeded shuffle of the runnable threads at every step"""

    def __init__(self, seed: Optional[int] = None):
        self.seed = seed
        self._random = random.Random(seed)

    def order(self, thread_ids):
        ids = sorted(thread_ids)
        self._random.shuffle(ids)
        return ids


@implementer(ITraceSink)
class TextTraceSink(object):
    def __init__(self, stream):
        self.stream = stream

    def emit(self, event: TraceEvent):
        self.stream.write(event.as_text() + "\n")


@implementer(ITraceSink)
class JsonTraceSink(object):
    """JSON-lines"""

    def __init__(self, stream):
        self.stream = stream

    def emit(self, event: TraceEvent):
        self.stream.write(event.as_json() + "\n")


# ------------------------------------------------------------------------------


class _ThreadState(object):
    # the cached decomposition, or None when the term has to be looked at
    outcome = None

    def __init__(self, thread_id: int, term: Term, main: bool = False):
        self.id = thread_id
        self.term = term
        self.main = main
        self.status = RUNNING

    def __repr__(self):
        return "<thread t%d %s: %s>" % (self.id, self.status, pretty(self.term))

    def update(self, term: Term) -> None:
        self.term = term
        self.status = RUNNING
        self.outcome = None

    def classify(self) -> Optional[Decomposition]:
        """None for a finished thread"""
        if self.status == DONE:
            return None
        if self.outcome is None:
            self.outcome = decompose(self.term)
            if self.outcome is None:
                self.status = DONE
        return self.outcome

    @property
    def request(self) -> Optional[Request]:
        d = self.classify()
        if d is not None and isinstance(d.kind, Request):
            return d.kind
        return None


class Channel(object):
    def __init__(self, channel_id: int, plus_type: Optional[Type], minus_type: Optional[Type]):
        self.id = channel_id
        (self.plus, self.minus) = endpoint_names(channel_id)
        self.types = {self.plus: plus_type, self.minus: minus_type}

    def __repr__(self):
        return "<channel ch%d>" % self.id

    def peer(self, endpoint: str) -> str:
        return self.minus if endpoint == self.plus else self.plus

    def advance(self, endpoint: str, t: Optional[Type]) -> None:
        self.types[endpoint] = t


def _session(t: Optional[Type]) -> Optional[Type]:
    if isinstance(t, SessionType):
        return unfold_all(t)
    return None


def _continuation(t: Optional[Type], label: Optional[str] = None) -> Optional[Type]:
    s = _session(t)
    if isinstance(s, (Out, In)):
        return s.cont
    if isinstance(s, (Select, Branch)) and label is not None:
        return s.branch_map().get(label)
    return None


# ------------------------------------------------------------------------------
# outcomes


@dataclass
class Done(object):
    values: Dict[int, Term]

    @property
    def main(self) -> Optional[Term]:
        return self.values.get(0)


@dataclass
class BlockedThread(object):
    thread: int
    request: str
    subject: Optional[str]
    peer: Optional[str]
    peer_holder: Optional[int]
    peer_state: str


@dataclass
class DeadlockReport(object):
    blocked: List[BlockedThread] = field(default_factory=list)

    @property
    def wait_for(self) -> Dict[int, Optional[int]]:
        """blocked thread -> the thread holding its peer endpoint"""
        return {b.thread: b.peer_holder for b in self.blocked}

    def render(self) -> str:
        lines = ["deadlock: %d thread(s) blocked" % len(self.blocked)]
        for b in self.blocked:
            lines.append(
                "  t%d blocked on %s %s; peer %s %s"
                % (b.thread, b.request, b.subject, b.peer, b.peer_state)
            )
        edges = [
            "t%d -> %s" % (t, "t%d" % u if u is not None else "nobody")
            for (t, u) in sorted(self.wait_for.items())
        ]
        lines.append("  wait-for: %s" % ", ".join(edges))
        return "\n".join(lines)


@dataclass
class Deadlock(object):
    report: DeadlockReport


@dataclass
class StepLimit(object):
    steps: int


@dataclass
class RuntimeErrorReport(object):
    threads: Tuple[int, int]
    channel: int
    requests: Tuple[str, str]

    def render(self) -> str:
        return "runtime error on ch%d: t%d does %s, t%d does %s" % (
            self.channel,
            self.threads[0],
            self.requests[0],
            self.threads[1],
            self.requests[1],
        )


Outcome = Union[Done, Deadlock, StepLimit]


_REQUEST_NAMES = {
    CloseReq: "close",
    WaitReq: "wait",
    SendReq: "send",
    ReceiveReq: "receive",
    SelectReq: "select",
    MatchReq: "match",
    NewReq: "new",
    ForkReq: "fork",
}

_PARTNERS = {
    CloseReq: WaitReq,
    WaitReq: CloseReq,
    SendReq: ReceiveReq,
    ReceiveReq: SendReq,
    SelectReq: MatchReq,
    MatchReq: SelectReq,
}


def forms_redex(a: Request, b: Request) -> bool:
    return _PARTNERS.get(type(a)) is type(b)


# ------------------------------------------------------------------------------


class Configuration(object):
    """
    Threads (by id), channels (by id), the endpoint table and the event log.
    The configuration is mutated in place by :func:`step_config`.
    """

    def __init__(self, scheduler=None, supply: Optional[NameSupply] = None):
        self.threads: Dict[int, _ThreadState] = {}
        self.channels: Dict[int, Channel] = {}
        self.endpoints: Dict[str, int] = {}
        self.events: List[TraceEvent] = []
        self.sinks: List = []
        self.scheduler = scheduler or LowestIdScheduler()
        self.supply = supply or NameSupply()
        # folds resolved types back to aliases in trace payloads
        self.fold = None
        self.next_thread = 0
        self.next_channel = 1
        self.steps = 0

    def __repr__(self):
        return "<Configuration %d thread(s), %d channel(s), step %d>" % (
            len(self.threads),
            len(self.channels),
            self.steps,
        )

    # construction

    def spawn(self, term: Term, main: bool = False) -> _ThreadState:
        t = _ThreadState(self.next_thread, term, main)
        self.threads[t.id] = t
        self.next_thread += 1
        return t

    def add_channel(
        self, plus_type: Optional[Type] = None, minus_type: Optional[Type] = None
    ) -> Channel:
        ch = Channel(self.next_channel, plus_type, minus_type)
        self.next_channel += 1
        self.channels[ch.id] = ch
        self.endpoints[ch.plus] = ch.id
        self.endpoints[ch.minus] = ch.id
        return ch

    def remove_channel(self, ch: Channel) -> None:
        del self.channels[ch.id]
        del self.endpoints[ch.plus]
        del self.endpoints[ch.minus]

    def channel_of(self, endpoint: str) -> Channel:
        try:
            return self.channels[self.endpoints[endpoint]]
        except KeyError:
            raise RuntimeFault_Linearity("%s belongs to no open channel" % endpoint)

    def holders(self, endpoint: str) -> List[int]:
        return [
            t.id
            for t in self.threads.values()
            if t.status != DONE and endpoint in free_vars(t.term)
        ]

    def record(self, rule: str, threads, channel=None, payload=None) -> TraceEvent:
        self.steps += 1
        event = TraceEvent(self.steps, rule, tuple(threads), channel, payload)
        self.events.append(event)
        for sink in self.sinks:
            sink.emit(event)
        log.debug("%s", event.as_text())
        return event

    @property
    def finished(self) -> bool:
        return all(t.classify() is None for t in self.threads.values())

    def values(self) -> Dict[int, Term]:
        return {t.id: t.term for t in self.threads.values() if t.status == DONE}

    def check_linearity(self) -> None:
        """every live endpoint occurs in at most one thread"""
        for endpoint in self.endpoints:
            holders = self.holders(endpoint)
            if len(holders) > 1:
                raise RuntimeFault_Linearity(
                    "%s occurs in threads %s"
                    % (endpoint, ", ".join("t%d" % h for h in holders))
                )


def boot(program: Union[CheckedProgram, Term], scheduler=None) -> Configuration:
    """a configuration with a single thread 0 running `main`"""
    if isinstance(program, CheckedProgram):
        if program.main is None:
            raise RuntimeFault("the program has no checked main declaration")
        term = program.main
    else:
        term = program
    c = Configuration(scheduler)
    if isinstance(program, CheckedProgram):
        c.fold = AliasFolder(program.program.type_decls).fold
    c.spawn(term, main=True)
    return c


# ------------------------------------------------------------------------------


def _partner(c: Configuration, t: _ThreadState, req: Request) -> Optional[_ThreadState]:
    ch = c.channel_of(req.subject)
    peer = ch.peer(req.subject)
    for u in c.threads.values():
        if u.id == t.id:
            continue
        other = u.request
        if other is not None and other.subject == peer and forms_redex(req, other):
            return u
    return None


def _resume(t: _ThreadState, term: Term) -> None:
    t.update(plug(t.outcome.context, term))


def _communicate(c: Configuration, t: _ThreadState, u: _ThreadState) -> None:
    a = t.request
    b = u.request
    ch = c.channel_of(a.subject)
    threads = (t.id, u.id)
    if isinstance(a, (CloseReq, WaitReq)):
        _resume(t, UNIT_TERM)
        _resume(u, UNIT_TERM)
        c.remove_channel(ch)
        c.record(R_CLOSE, threads, ch.id, "ch%d close" % ch.id)
        return
    if isinstance(a, (SendReq, ReceiveReq)):
        (sender, receiver) = (t, u) if isinstance(a, SendReq) else (u, t)
        send = sender.request
        recv = receiver.request
        ch.advance(send.endpoint, _continuation(ch.types[send.endpoint]))
        ch.advance(recv.endpoint, _continuation(ch.types[recv.endpoint]))
        _resume(sender, var(send.endpoint))
        _resume(receiver, PairIntro(send.value, var(recv.endpoint)))
        payload = pretty(display(send.value, c.fold))
        c.record(R_COM, threads, ch.id, "ch%d %s" % (ch.id, payload))
        return
    (selector, matcher) = (t, u) if isinstance(a, SelectReq) else (u, t)
    sel = selector.request
    mat = matcher.request
    branch = None
    for candidate in mat.branches:
        if candidate.label == sel.label:
            branch = candidate
    if branch is None:
        raise RuntimeFault("no branch for label %s on ch%d" % (sel.label, ch.id))
    ch.advance(sel.endpoint, _continuation(ch.types[sel.endpoint], sel.label))
    ch.advance(mat.endpoint, _continuation(ch.types[mat.endpoint], sel.label))
    body = substitute(lift(var(mat.endpoint)), branch.binder, branch.body, c.supply)
    _resume(selector, var(sel.endpoint))
    _resume(matcher, body)
    c.record(R_BRANCH, threads, ch.id, "ch%d %s" % (ch.id, sel.label))


def _new_types(annotation) -> Tuple[Optional[Type], Optional[Type]]:
    if isinstance(annotation, Fun) and isinstance(annotation.res, Pair):
        return (annotation.res.left, annotation.res.right)
    return (None, None)


def _act(c: Configuration, t: _ThreadState) -> bool:
    """make `t` move if it can"""
    d = t.classify()
    if d is None:
        return False
    kind = d.kind
    if isinstance(kind, str):
        reduct = contract(d.redex, kind, c.supply)
        t.update(plug(d.context, reduct))
        c.record(kind, (t.id,))
        return True
    if isinstance(kind, NewReq):
        ch = c.add_channel(*_new_types(kind.annotation))
        _resume(t, PairIntro(var(ch.plus), var(ch.minus)))
        c.record(R_NEW, (t.id,), ch.id, "ch%d" % ch.id)
        return True
    if isinstance(kind, ForkReq):
        child = c.spawn(App(kind.thunk, UNIT_TERM))
        _resume(t, UNIT_TERM)
        c.record(R_FORK, (t.id, child.id))
        return True
    partner = _partner(c, t, kind)
    if partner is None:
        t.status = BLOCKED
        return False
    _communicate(c, t, partner)
    return True


def step_config(c: Configuration) -> Union[Configuration, Done, Deadlock]:
    """apply one reduction; Done or Deadlock when none applies"""
    live = [t.id for t in c.threads.values() if t.classify() is not None]
    for thread_id in c.scheduler.order(live):
        if _act(c, c.threads[thread_id]):
            return c
    if not live:
        return Done(c.values())
    report = deadlock_report(c)
    log.info("deadlock after %d steps: %d thread(s) blocked", c.steps, len(live))
    return Deadlock(report)


def run(
    c: Configuration,
    max_steps: int = DEFAULT_MAX_STEPS,
    func_on_step: Optional[Callable[[Configuration], None]] = None,
    check_errors: bool = False,
) -> Outcome:
    """
    :param func_on_step: called with the configuration after every step
    :param check_errors: run :func:`detect_runtime_error` before the first
        step and after every step; a report raises
        :class:`semp.exceptions.RuntimeFault_Communication`
    """
    if max_steps <= 0:
        raise ValueError("max_steps must be positive")
    if check_errors:
        _check_errors(c)
    start = c.steps
    while c.steps - start < max_steps:
        result = step_config(c)
        if not isinstance(result, Configuration):
            return result
        if check_errors:
            _check_errors(c)
        if func_on_step is not None:
            func_on_step(c)
    result = step_config(c) if c.finished else None
    if isinstance(result, Done):
        return result
    return StepLimit(c.steps - start)


# ------------------------------------------------------------------------------


def _describe(req: Optional[Request]) -> str:
    if req is None:
        return "nothing"
    name = _REQUEST_NAMES[type(req)]
    if isinstance(req, SelectReq):
        return "%s %s" % (name, req.label)
    return name


def deadlock_report(c: Configuration) -> DeadlockReport:
    report = DeadlockReport()
    for t in sorted(c.threads.values(), key=lambda k: k.id):
        req = t.request
        if req is None:
            continue
        subject = req.subject
        peer = None
        holder = None
        state = "belongs to no channel"
        if subject in c.endpoints:
            peer = c.channel_of(subject).peer(subject)
            holders = [h for h in c.holders(peer) if h != t.id]
            if holders:
                holder = holders[0]
                other = c.threads[holder].request
                if other is not None:
                    state = "held by t%d, blocked on %s %s" % (
                        holder,
                        _describe(other),
                        other.subject,
                    )
                else:
                    state = "held by t%d" % holder
            else:
                state = "held by no thread"
        report.blocked.append(
            BlockedThread(t.id, _describe(req), subject, peer, holder, state)
        )
    return report


def _check_errors(c: Configuration) -> None:
    report = detect_runtime_error(c)
    if report is not None:
        log.error("step %d: %s", c.steps, report.render())
        raise RuntimeFault_Communication(report.render())


def detect_runtime_error(c: Configuration) -> Optional[RuntimeErrorReport]:
    """
    Two threads whose subjects are the two endpoints of one channel but
    whose requests do not form a redex.
    """
    waiting = []
    for t in sorted(c.threads.values(), key=lambda k: k.id):
        req = t.request
        if isinstance(req, COMMUNICATION_REQUESTS):
            waiting.append((t, req))
    for (i, (t, a)) in enumerate(waiting):
        if a.subject not in c.endpoints:
            continue
        peer = c.channel_of(a.subject).peer(a.subject)
        for (u, b) in waiting[i + 1 :]:
            if b.subject == peer and not forms_redex(a, b):
                return RuntimeErrorReport(
                    (t.id, u.id),
                    c.endpoints[peer],
                    (_describe(a), _describe(b)),
                )
    return None


def to_process(c: Configuration) -> Process:
    """the configuration as a typed process term"""
    threads = [
        Thread(t.term, main=t.main)
        for t in sorted(c.threads.values(), key=lambda k: k.id)
    ]
    if not threads:
        p: Process = Thread(UNIT_TERM)
    else:
        p = threads[-1]
        for t in reversed(threads[:-1]):
            p = Par(t, p)
    for ch in sorted(c.channels.values(), key=lambda k: -k.id):
        p = Restrict(ch.plus, ch.minus, ch.types[ch.plus], ch.types[ch.minus], p)
    return p


def channel_events(c: Configuration, channel_id: int) -> List[str]:
    """the communication payloads seen on one channel, without the channel"""
    out = []
    for e in c.events:
        if e.channel == channel_id and e.rule in (R_COM, R_BRANCH, R_CLOSE):
            out.append(e.payload.split(" ", 1)[1])
    return out
