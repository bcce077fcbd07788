from solitons.management.base import LabCommand


class Command(LabCommand):
    help = 'Classify a strict Walker metric by phi and reconstruct its steady soliton potential'
    mode = 'classify'
