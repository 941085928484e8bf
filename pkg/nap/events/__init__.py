"""
Event algebras for the four sample spaces
"""

from ..errors import IncompatibleIndexError
from .base import Count, Event, GridIndex, SpaceKind
from .coin import CoinEvent, CoinIndex, CoinSequence, cylinder, sequences
from .line import LineEvent, Piece, embed, interval
from .nat import NatEvent, prog
from .weights import WeightFn, weighted_count, weighted_count_at
from . import coin, line, nat


def full(space: SpaceKind) -> Event:
    if space is SpaceKind.NAT:
        return nat.full()
    if space is SpaceKind.COIN:
        return coin.full()
    return line.whole(space)


def empty(space: SpaceKind) -> Event:
    if space is SpaceKind.NAT:
        return nat.empty()
    if space is SpaceKind.COIN:
        return coin.empty()
    return line.empty(space)


def finite(space: SpaceKind, points) -> Event:
    if space is SpaceKind.NAT:
        return nat.finite(points)
    if space is SpaceKind.COIN:
        return coin.sequences(points)
    return line.finite(space, points)


def lift(event: Event, space: SpaceKind) -> Event:
    """View an event of the natural numbers inside a line space"""
    if event.space is space:
        return event
    if isinstance(event, NatEvent) and space in (SpaceKind.Q, SpaceKind.R):
        return embed(space, event)
    raise IncompatibleIndexError(f"a {event.space.value} event cannot be used in space {space.value}")


__all__ = [
    'CoinEvent', 'CoinIndex', 'CoinSequence', 'Count', 'Event', 'GridIndex', 'LineEvent', 'NatEvent',
    'Piece', 'SpaceKind', 'WeightFn', 'coin', 'cylinder', 'embed', 'empty', 'finite', 'full',
    'interval', 'lift', 'line', 'nat', 'prog', 'sequences', 'weighted_count', 'weighted_count_at',
]
