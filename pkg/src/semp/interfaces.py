# -*- coding: utf-8 -*-

# pypi
from zope.interface import Attribute
from zope.interface import Interface


# ==============================================================================


class IScheduler(Interface):
    """Decides which thread of a configuration moves next."""

    def order(thread_ids):
        """
        Return the ids of `thread_ids` in the order they should be tried.
        The first one that can move does.
        """


class ITraceSink(Interface):
    """Receives every runtime event as it happens."""

    stream = Attribute("file-like object the events are written to")

    def emit(event):
        """Record one :class:`semp.runtime.TraceEvent`."""
