// pattern: P6 main-exit
// expected: no-deadlock
package main

import "fmt"

func main() {
	ch := make(chan int)
	go func() {
		ch <- 1
		ch <- 2
	}()
	// main returns after the first value; the sender is still blocked.
	fmt.Println(<-ch)
}
