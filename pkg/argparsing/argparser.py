import argparse
from dataclasses import dataclass, field


####################################################################################################

class NewlineFormatter(argparse.HelpFormatter):
    """
    Keeps the newlines of help texts and descriptions that start with "R|" (the prefix itself is
    not printed). Other texts are wrapped as usual.
    """

    def _split_lines(self, text, width):
        if text.startswith("R|"):
            return text[2:].splitlines()
        return super()._split_lines(text, width)

    def _fill_text(self, text, width, indent):
        if text.startswith("R|"):
            return text[2:]
        return super()._fill_text(text, width, indent)


####################################################################################################

@dataclass
class Argument:
    name: str
    help: str
    action: str = "store"
    dest: str | None = None
    kwargs: dict = field(default_factory=dict)


@dataclass
class Delimiter:
    name: str


@dataclass
class Command:
    """
    Description of a program command.
    """
    name: str
    help: str
    description: str | None = None
    args: list[Argument] = field(default_factory=list)

    def arg(self, name: str, help: str,
            action: str = "store",
            dest: str | None = None,
            **kwargs):
        """
        Adds an argument that is specific to this command. Takes the same arguments as
        `argparse.ArgumentParser.add_argument`.
        """
        self.args.append(Argument(
            name=name, help=help, action=action, dest=dest, kwargs=kwargs))


####################################################################################################

class Argparser:
    """
    A thin layer over argparse adding two things: commands can be grouped under delimiters in
    the help message, and "global" arguments can appear both before and after the command
    (`signalgame --seed 3 gen` and `signalgame gen --seed 3` are the same).

    The parser automatically gets a -h/--help option that shows the help for the program or for a
    command if present.
    """

    # ----------------------------------------------------------------------------------------------

    def __init__(self, program_name: str, description: str):
        self.program_name = program_name
        self.description = description
        self.parser = None
        self.subparsers = None
        self.command_parsers = {}
        self.items = []  # type: list[Command | Delimiter]
        self.global_args = []  # type: list[Argument]

    # ----------------------------------------------------------------------------------------------

    def delimiter(self, name: str):
        """
        Starts a new group of commands in the help message.
        """
        self.items.append(Delimiter(name))

    # ----------------------------------------------------------------------------------------------

    def command(self, name: str, help: str, description: str | None = None) -> Command:
        command = Command(name=name, help=help, description=description)
        self.items.append(command)
        return command

    # ----------------------------------------------------------------------------------------------

    def arg(self, name: str, help: str,
            action: str = "store",
            dest: str | None = None,
            **kwargs):
        """
        Adds a global argument, that can appear both before or after a command.
        """
        self.global_args.append(Argument(
            name=name, help=help, action=action, dest=dest, kwargs=kwargs))

    # ----------------------------------------------------------------------------------------------

    def parse(self, argv: list[str] | None = None) -> argparse.Namespace:
        """
        Parses `argv` (the program's arguments by default). For global arguments given both before
        and after the command, the one after the command wins.
        """
        self._build_parser()
        namespace = self.parser.parse_args(argv)
        ns = vars(namespace)

        for arg in self.global_args:
            dest = self._get_dest(arg)
            after = ns.pop(dest + "_command", None)
            if arg.action == "store_true":
                ns[dest] = ns[dest] or bool(after)
            elif arg.action == "store_false":
                ns[dest] = ns[dest] and after is not False
            elif after is not None:
                ns[dest] = after

        return namespace

    # ----------------------------------------------------------------------------------------------

    def print_help(self, command: str | None = None):
        """
        Prints the help for the program (no command specified) or for a specific command.
        """
        self._build_parser()
        if command is None:
            self.parser.print_help()
        else:
            self.command_parsers[command].print_help()

    # ----------------------------------------------------------------------------------------------

    def _build_parser(self):
        if self.parser is not None:
            return

        self.parser = argparse.ArgumentParser(
            prog=self.program_name,
            description=self.description,
            formatter_class=NewlineFormatter,
            allow_abbrev=False)

        self.subparsers = self.parser.add_subparsers(
            title="commands",
            dest="command",
            metavar="<command>")

        for item in self.items:
            if isinstance(item, Command):
                parser = self.subparsers.add_parser(
                    item.name,
                    help=item.help,
                    description=item.description or item.help,
                    formatter_class=NewlineFormatter,
                    allow_abbrev=False)
                self.command_parsers[item.name] = parser
                for arg in item.args:
                    self._add_arg(parser, arg)
            else:
                formatted = f"\n    -- {item.name} --\n"
                self.subparsers.add_parser(formatted, help="")
                # Don't list the delimiter among the valid commands in error messages.
                del self.subparsers.choices[formatted]

        # must come after adding the commands
        for arg in self.global_args:
            self._add_arg(self.parser, arg)
            # The copy after the command has no default, so that we can tell if it was given.
            kwargs = {k: v for k, v in arg.kwargs.items() if k != "default"}
            if arg.action not in ("store_true", "store_false"):
                kwargs["default"] = None
            copy = Argument(name=arg.name, help=arg.help, action=arg.action,
                            dest=self._get_dest(arg) + "_command", kwargs=kwargs)
            for parser in self.command_parsers.values():
                self._add_arg(parser, copy)

    # ----------------------------------------------------------------------------------------------

    @staticmethod
    def _add_arg(parser: argparse.ArgumentParser, arg: Argument):
        parser.add_argument(arg.name, help=arg.help, action=arg.action, dest=arg.dest,
                            **arg.kwargs)

    # ----------------------------------------------------------------------------------------------

    @staticmethod
    def _get_dest(arg: Argument) -> str:
        if arg.dest:
            return arg.dest
        return arg.name.removeprefix("--").removeprefix("-").replace("-", "_")

####################################################################################################
