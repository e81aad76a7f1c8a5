"""Simulator, protocol library, and bounded model checker for coordination
protocols where prisoners communicate solely through room configurations."""

from .core import (
    CursorEdge,
    CursorGraph,
    Declare,
    Flip,
    FlipNotIn,
    Oscillate,
    PrisonerState,
    Program,
    Repeat,
    See,
    VisitOutcome,
    initial_state,
    reachable_cursor_graph,
    visit,
)
from .errors import (
    ConstructionError,
    HistoryCorruptionError,
    LockstepError,
    ResourceLimitError,
    UnsupportedParameterError,
    UsageError,
)
from .protocols import (
    PROTOCOLS,
    AllMustDeclare,
    AllRoomsAllPrisoners,
    AtLeastOneRoom,
    Guarantee,
    ProtocolInstance,
    arbitrary_start_wrapper,
    at_least_one_room,
    build_instance,
    forced_flip_transform,
    one_room_known,
    one_room_unknown,
    room_at_a_time_six,
    sequential_chain,
    three_config_knowledge,
    three_config_prob1,
    two_config_prob_eps,
    two_rooms_three_configs,
    two_switch_prisoner_at_a_time,
    two_switch_room_at_a_time,
    with_multiple_declarations,
    with_repeated_entries,
)
from .verifier import (
    ExplorationResult,
    Outcome,
    SimulationResult,
    VerifyReport,
    VisitRecord,
    World,
    check_knowledge,
    explore,
    simulate,
    step_world,
    verify_instance,
)
from .monitors import MONITORS, monitors_for, run_monitor
from .ownership import (
    ObservedEvent,
    OwnershipTable,
    apply_event,
    initial_table,
    is_finished,
    provable_ownership_bruteforce,
    table_from_history,
)
from .scheduling import (
    SCHEDULERS,
    ExtendedSchedule,
    PointerRoomSchedule,
    RoundRobin,
    S1Adversary,
    SchedulePair,
    SeededRandom,
    SingleRoomSchedule,
    WitnessSchedule,
    build_schedule_pair,
    build_scheduler,
    extend_to_valid,
    find_recurring_config,
)
from .transcripts import (
    TranscriptKnowledge,
    TranscriptRun,
    adversarial_prefixes,
    make_knowledge,
    prefix_safety_search,
    render_transcript,
    run_transcript_protocol,
    transcript_visit,
)

__version__ = "0.1.0"
