"""Exception types shared by every module."""


class SkewlabError(Exception):
    pass


class InputError(SkewlabError, ValueError):
    """Malformed input: wrong shape, wrong domain, unparsable descriptor."""


class ContractError(SkewlabError, ValueError):
    """A documented precondition of an operation does not hold."""


class VerificationError(SkewlabError):
    """An identity that a construction must satisfy failed.

    ``identity`` names the failing check so reports can point at it.
    """

    def __init__(self, identity, detail=""):
        self.identity = identity
        self.detail = detail
        msg = identity if not detail else f"{identity}: {detail}"
        super().__init__(msg)
