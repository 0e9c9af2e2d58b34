public class Main {
    public static void main(String[] args) {
        int[][] grid = {{1, 2, 3}, {4, 5, 6}};
        int best = grid[0][0];
        for (int r = 0; r < grid.length; r++) {
            for (int c = 0; c < grid[r].length; c++) {
                best = Math.max(best, grid[r][c]);
            }
        }
        System.out.println(best);
    }
}
