"""
Truncated a-adic integers: digit sequences x_k with 0 <= x_k < a_k and carry addition

    x_0 + y_0 = t_0 a_0 + z_0,   x_(k+1) + y_(k+1) + t_k = t_(k+1) a_(k+1) + z_(k+1).
"""
import logging

from pycylinder.exceptions import SolenoidError
from pycylinder.helpers import prefix_product

logger = logging.getLogger(__name__)


class BaseSequence(object):
    """
    Finite prefix (a_0, ..., a_(P-1)) of the base sequence, every a_k >= 2.
    The prefix length P is the working precision.
    """

    def __init__(self, values):
        try:
            values = [int(v) for v in values]
        except (TypeError, ValueError):
            raise SolenoidError('A base sequence must be a list of integers, got {}'.format(values))
        if not values:
            raise SolenoidError('A base sequence needs at least one entry')
        if any(v < 2 for v in values):
            raise SolenoidError('Every entry of a base sequence must be at least 2, got {}'.format(values))
        self.__values = tuple(values)

    @property
    def values(self):
        return self.__values

    @property
    def precision(self):
        return len(self.__values)

    def __getitem__(self, k):
        return self.__values[k]

    def __len__(self):
        return len(self.__values)

    def __eq__(self, other):
        if not isinstance(other, BaseSequence):
            return NotImplemented
        return self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return 'BaseSequence({})'.format(list(self.values))

    def prefix_product(self, n):
        """
        a_0 a_1 ... a_n
        """
        return prefix_product(self.values, n)

    @property
    def modulus(self):
        return self.prefix_product(self.precision - 1)

    @classmethod
    def constant(cls, value, precision):
        return cls([value] * precision)

    @classmethod
    def consecutive(cls, start, precision):
        return cls(range(start, start + precision))

    def to_dict(self):
        return {'base': list(self.values)}

    @classmethod
    def from_dict(cls, data):
        if isinstance(data, dict):
            if 'base' not in data:
                raise SolenoidError('Missing "base" entry in {}'.format(data))
            data = data['base']
        return cls(data)


class AdicInteger(object):

    def __init__(self, digits, base):
        digits = tuple(int(d) for d in digits)
        if len(digits) != base.precision:
            raise SolenoidError('Expected {} digits, got {}'.format(base.precision, len(digits)))
        for k, (digit, radix) in enumerate(zip(digits, base.values)):
            if not 0 <= digit < radix:
                raise SolenoidError('Digit {} at position {} is outside [0, {})'.format(digit, k, radix))
        self.__digits = digits
        self.__base = base

    @property
    def digits(self):
        return self.__digits

    @property
    def base(self):
        return self.__base

    @classmethod
    def zero(cls, base):
        return cls([0] * base.precision, base)

    @classmethod
    def from_int(cls, m, base):
        """
        Image of the integer m in the truncated a-adic integers.
        """
        rest = int(m) % base.modulus
        digits = []
        for radix in base.values:
            digits.append(rest % radix)
            rest //= radix
        return cls(digits, base)

    def to_int(self):
        """
        Residue of the truncated digits modulo a_0 ... a_(P-1).
        """
        value, weight = 0, 1
        for digit, radix in zip(self.digits, self.base.values):
            value += digit * weight
            weight *= radix
        return value

    def __eq__(self, other):
        if not isinstance(other, AdicInteger):
            return NotImplemented
        return self.base == other.base and self.digits == other.digits

    def __hash__(self):
        return hash((self.base, self.digits))

    def __repr__(self):
        return 'AdicInteger({})'.format(list(self.digits))

    def __add__(self, other):
        return adic_add(self, other)

    def __neg__(self):
        return adic_negate(self)


def adic_add_with_carries(x, y):
    """
    :return: (sum, list of carries t_k)
    """
    if x.base != y.base:
        raise SolenoidError('Can not add a-adic integers over different bases')

    digits, carries = [], []
    carry = 0
    for x_k, y_k, radix in zip(x.digits, y.digits, x.base.values):
        total = x_k + y_k + carry
        carry, digit = divmod(total, radix)
        digits.append(digit)
        carries.append(carry)
    return AdicInteger(digits, x.base), carries


def adic_add(x, y):
    total, _ = adic_add_with_carries(x, y)
    return total


def adic_negate(x):
    return AdicInteger.from_int(-x.to_int(), x.base)
