"""
Reading and writing model documents (``.momdp.json``).

A model document is a JSON object with the keys ``format_version`` (always 1), ``model`` and ``objectives``. See the
"Model documents" page of the documentation for the annotated schema. :func:`serialize_model_document` writes the
canonical form: keys in the documented order, label and reward names sorted, transitions sorted by target, floats in
shortest round-trip form.
"""
import math
from .utilities import json, format_float
from .types import *
from .mdp import Mdp, Action, Violation, validate_mdp
from .objectives import ObjectiveSpec

FORMAT_VERSION = 1
FILE_EXTENSION = '.momdp.json'

_WHITESPACE = ' \t\n\r'


class ModelDocument(object):
    """A decoded model document: an :class:`Mdp` and the list of objectives to analyse on it."""

    def __init__(self, model: Mdp, objectives: Sequence[ObjectiveSpec], format_version: int = FORMAT_VERSION):
        self.format_version = format_version
        self.model = model
        self.objectives = list(objectives)

    def __eq__(self, other):
        if not isinstance(other, ModelDocument):
            return NotImplemented
        return (self.format_version == other.format_version and self.model == other.model
                and self.objectives == other.objectives)

    def __repr__(self):
        return 'ModelDocument({!r}, {!r})'.format(self.model, self.objectives)

    def save(self, filename: str):
        """
        Save the document to a file in canonical form.

        :param filename: The file to save to, conventionally ending in ``.momdp.json``.
        """
        with open(filename, 'w', encoding='utf-8', newline='') as fp:
            fp.write(serialize_model_document(self))

    @classmethod
    def from_file(cls, filename: str) -> 'ModelDocument':
        """
        :param filename: The file to load.
        :return: The decoded :class:`ModelDocument`.
        """
        with open(filename, encoding='utf-8', newline='') as fp:
            return parse_model_document(fp.read())


def _skip_whitespace(text: str, idx: int) -> int:
    while idx < len(text) and text[idx] in _WHITESPACE:
        idx += 1
    return idx


def _index_positions(text: str) -> Dict[tuple, int]:
    """Maps the path of every value in a syntactically valid JSON text to the offset where the value starts."""
    decoder = json.JSONDecoder()
    scanstring = json.decoder.scanstring
    positions = {}

    def walk(idx, path):
        idx = _skip_whitespace(text, idx)
        positions[path] = idx
        ch = text[idx]
        if ch == '{':
            idx = _skip_whitespace(text, idx + 1)
            if text[idx] == '}':
                return idx + 1
            while True:
                key, idx = scanstring(text, idx + 1)
                idx = _skip_whitespace(text, idx) + 1
                idx = _skip_whitespace(text, walk(idx, path + (key,)))
                if text[idx] == ',':
                    idx = _skip_whitespace(text, idx + 1)
                    continue
                return idx + 1
        elif ch == '[':
            idx = _skip_whitespace(text, idx + 1)
            if text[idx] == ']':
                return idx + 1
            i = 0
            while True:
                idx = _skip_whitespace(text, walk(idx, path + (i,)))
                i += 1
                if text[idx] == ',':
                    idx += 1
                    continue
                return idx + 1
        else:
            _, end = decoder.raw_decode(text, idx)
            return end

    walk(0, ())
    return positions


def _line_column(text: str, offset: int) -> Tuple[int, int]:
    line = text.count('\n', 0, offset) + 1
    column = offset - (text.rfind('\n', 0, offset) + 1) + 1
    return line, column


def _field_name(path: tuple) -> str:
    name = ''
    for part in path:
        if isinstance(part, int):
            name += '[{}]'.format(part)
        else:
            name += ('.' if name else '') + part
    return name


class _Decoder(object):
    def __init__(self, text: str, data):
        self.text = text
        self.data = data
        self._positions = None

    def position(self, path: tuple) -> Tuple[int, int]:
        if self._positions is None:
            self._positions = _index_positions(self.text)
        while path not in self._positions and path:
            path = path[:-1]
        return _line_column(self.text, self._positions.get(path, 0))

    def fail(self, path: tuple, message: str):
        line, column = self.position(path)
        raise DocumentSchemaError(message, _field_name(path) or '<document>', line, column)

    def field(self, obj: dict, path: tuple, key: str, types, optional=False):
        if key not in obj:
            if optional:
                return None
            self.fail(path + (key,), 'missing required field')
        value = obj[key]
        if value is None and optional:
            return None
        if isinstance(value, bool) and bool not in types:
            self.fail(path + (key,), 'expected {}, found a boolean'.format(' or '.join(t.__name__ for t in types)))
        if not isinstance(value, types):
            self.fail(path + (key,), 'expected {}, found {}'.format(
                ' or '.join(t.__name__ for t in types), type(value).__name__))
        return value

    def element(self, value, path: tuple, types):
        if isinstance(value, bool) or not isinstance(value, types):
            self.fail(path, 'expected {}, found {}'.format(' or '.join(t.__name__ for t in types),
                                                          type(value).__name__))
        return value

    def decode(self) -> ModelDocument:
        if not isinstance(self.data, dict):
            self.fail((), 'document must be a JSON object')

        version = self.field(self.data, (), 'format_version', (int,))
        if version != FORMAT_VERSION:
            self.fail(('format_version',), 'unsupported format version {}, expected {}'.format(
                version, FORMAT_VERSION))

        raw_model = self.field(self.data, (), 'model', (dict,))
        model = self.decode_model(raw_model, ('model',))

        violations = validate_mdp(model)
        if violations:
            line, column = self.position(self.violation_path(violations[0]))
            raise ModelValidationError(violations, line, column)

        raw_objectives = self.field(self.data, (), 'objectives', (list,))
        objectives = [self.decode_objective(o, ('objectives', i), model) for i, o in enumerate(raw_objectives)]
        if not objectives:
            self.fail(('objectives',), 'at least one objective is required')

        return ModelDocument(model, objectives, version)

    @staticmethod
    def violation_path(violation: Violation) -> tuple:
        path = ('model', 'actions')
        if violation.state is not None:
            path += (violation.state,)
            if violation.action is not None:
                path += (violation.action,)
        return path

    def decode_model(self, raw: dict, path: tuple) -> Mdp:
        num_states = self.field(raw, path, 'num_states', (int,))
        initial_state = self.field(raw, path, 'initial_state', (int,))
        raw_actions = self.field(raw, path, 'actions', (list,))

        actions = []
        for s, raw_state in enumerate(raw_actions):
            state_path = path + ('actions', s)
            self.element(raw_state, state_path, (list,))
            state_actions = []
            for a, raw_action in enumerate(raw_state):
                action_path = state_path + (a,)
                self.element(raw_action, action_path, (dict,))
                label = self.field(raw_action, action_path, 'label', (str,))
                raw_distribution = self.field(raw_action, action_path, 'distribution', (list,))
                distribution = []
                for i, pair in enumerate(raw_distribution):
                    pair_path = action_path + ('distribution', i)
                    self.element(pair, pair_path, (list,))
                    if len(pair) != 2:
                        self.fail(pair_path, 'expected a [target, probability] pair')
                    target = self.element(pair[0], pair_path + (0,), (int,))
                    prob = self.element(pair[1], pair_path + (1,), (int, float))
                    distribution.append((target, float(prob)))
                state_actions.append(Action(label, distribution))
            actions.append(state_actions)

        raw_labels = self.field(raw, path, 'labels', (dict,), optional=True) or {}
        labels = {}
        for name, raw_states in raw_labels.items():
            label_path = path + ('labels', name)
            self.element(raw_states, label_path, (list,))
            labels[name] = [self.element(s, label_path + (i,), (int,)) for i, s in enumerate(raw_states)]

        raw_rewards = self.field(raw, path, 'rewards', (dict,), optional=True) or {}
        rewards = {}
        for name, raw_values in raw_rewards.items():
            reward_path = path + ('rewards', name)
            self.element(raw_values, reward_path, (list,))
            values = []
            for s, per_state in enumerate(raw_values):
                self.element(per_state, reward_path + (s,), (list,))
                values.append([float(self.element(r, reward_path + (s, a), (int, float)))
                               for a, r in enumerate(per_state)])
            rewards[name] = values

        return Mdp(num_states, initial_state, actions, labels, rewards)

    def decode_objective(self, raw, path: tuple, model: Mdp) -> ObjectiveSpec:
        self.element(raw, path, (dict,))
        kind = self.field(raw, path, 'kind', (str,))
        try:
            kind = ObjectiveKind(kind)
        except ValueError:
            self.fail(path + ('kind',), 'unknown objective kind {!r}, expected one of {}'.format(
                kind, ', '.join(k.value for k in ObjectiveKind)))
        target = self.field(raw, path, 'target', (str,))
        step_bound = self.field(raw, path, 'step_bound', (int,), optional=True)
        if step_bound is not None and step_bound < 1:
            self.fail(path + ('step_bound',), 'step bound must be at least 1')
        if kind.is_reachability and target not in model.labels:
            self.fail(path + ('target',), 'unknown proposition {!r}'.format(target))
        if not kind.is_reachability and target not in model.rewards:
            self.fail(path + ('target',), 'unknown reward structure {!r}'.format(target))
        return ObjectiveSpec(kind, target, step_bound)


def parse_model_document(text: str) -> ModelDocument:
    """
    Decodes a model document.

    :param text: The document text.
    :return: The decoded :class:`ModelDocument`.
    :raises DocumentSyntaxError: If the text is not valid JSON.
    :raises DocumentSchemaError: If a field is missing or has the wrong type; names the field.
    :raises ModelValidationError: If the decoded model fails :func:`validate_mdp`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentSyntaxError(e.msg, e.lineno, e.colno)
    return _Decoder(text, data).decode()


def _dumps(value) -> str:
    return json.dumps(value, separators=(', ', ': '), ensure_ascii=False, allow_nan=False)


def _dumps_floats(values) -> str:
    return '[' + ', '.join(format_float(v) for v in values) + ']'


def serialize_model_document(doc: ModelDocument) -> str:
    """
    Encodes a document in canonical form. Equal documents always produce identical text.

    :param doc: A valid :class:`ModelDocument`.
    :return: The document text, ending with a newline.
    """
    model = doc.model
    for name, values in model.rewards.items():
        for per_state in values:
            if not all(math.isfinite(r) for r in per_state):
                raise ValueError('reward {!r} has non-finite values'.format(name))

    lines = ['{',
             '  "format_version": {},'.format(doc.format_version),
             '  "model": {',
             '    "num_states": {},'.format(model.num_states),
             '    "initial_state": {},'.format(model.initial_state)]

    action_lines = []
    for state_actions in model.actions:
        encoded = []
        for action in state_actions:
            distribution = ', '.join('[{}, {}]'.format(t, format_float(p)) for t, p in action.distribution)
            encoded.append('{{"label": {}, "distribution": [{}]}}'.format(_dumps(action.label), distribution))
        action_lines.append('      [' + ', '.join(encoded) + ']')
    lines.append('    "actions": [')
    lines.append(',\n'.join(action_lines))
    lines.append('    ],')

    label_lines = ['      {}: {}'.format(_dumps(name), _dumps(sorted(model.labels[name])))
                   for name in sorted(model.labels)]
    lines.append('    "labels": {' + ('\n' + ',\n'.join(label_lines) + '\n    ' if label_lines else '') + '},')

    reward_lines = ['      {}: [{}]'.format(_dumps(name), ', '.join(_dumps_floats(v) for v in model.rewards[name]))
                    for name in sorted(model.rewards)]
    lines.append('    "rewards": {' + ('\n' + ',\n'.join(reward_lines) + '\n    ' if reward_lines else '') + '}')
    lines.append('  },')

    objective_lines = ['    {}'.format(_dumps({'kind': spec.kind.value, 'target': spec.target,
                                                'step_bound': spec.step_bound}))
                       for spec in doc.objectives]
    lines.append('  "objectives": [')
    lines.append(',\n'.join(objective_lines))
    lines.append('  ]')
    lines.append('}')
    return '\n'.join(lines) + '\n'
