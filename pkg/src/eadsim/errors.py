"""Exception hierarchy shared by all eadsim modules."""


class EadError(Exception):
    """Base class for every error raised by eadsim."""


class ConfigurationError(EadError, ValueError):
    """Bad configuration: unknown subsystem label, malformed scenario file."""


class InvalidParameter(EadError, ValueError):
    """A numeric argument is outside its allowed range."""


class ContractViolation(EadError, ValueError):
    """Input breaks an operation's precondition (shape, Hermiticity)."""


class DomainError(EadError, ValueError):
    """State is outside the family an operation is defined on."""


class DecodeError(EadError):
    """The parity-code decoder could not recover the logical qubit."""


class SessionFailure(EadError):
    """A user-pair session could not complete.

    ``hop_log`` carries the (node id, timestamp) pairs the transfer
    managed before the failure.
    """

    def __init__(self, message, pair_id=None, hop_log=()):
        super().__init__(message)
        self.pair_id = pair_id
        self.hop_log = tuple(hop_log)
